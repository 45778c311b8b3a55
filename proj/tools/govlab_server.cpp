// HTTP gateway. Replays <data_dir>/events.jsonl on startup and refuses to start
// on a broken log, naming the first bad seq.

#include "govlab/chain/audit_chain.hpp"
#include "govlab/core/error.hpp"
#include "govlab/deliberation/http_responder.hpp"
#include "govlab/gateway/config.hpp"
#include "govlab/gateway/server.hpp"
#include "govlab/gateway/store.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

using namespace govlab;

namespace {
gateway::ApiServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"govlab-server: governance experiment HTTP gateway"};
  std::string config_path;
  app.add_option("--config", config_path, "config file (key = value)");
  CLI11_PARSE(app, argc, argv);

  try {
    auto config = config_path.empty() ? gateway::parse_config("") : gateway::load_config(config_path);
    gateway::apply_env_overrides(config);
    gateway::check_paths(config);
    auto responder = deliberation::make_responder(config.ai_endpoint, config.ai_timeout);
    auto store = gateway::EventStore::open(config.data_dir, gateway::platform_options(config, responder), system_now,
                                           config.snapshot_every);
    std::cerr << "replayed " << store->platform().chain().size() << " events from " << store->events_path() << '\n';

    gateway::ServerOptions options;
    options.after_command = [&store] { store->maybe_snapshot(); };
    gateway::ApiServer server(store->platform(), options);
    const int port = server.bind(config.host, config.port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "listening on " << config.host << ':' << port << '\n';
    server.serve();
    store->write_snapshot();
    return 0;
  } catch (const chain::BrokenChain& e) {
    std::cerr << "refusing to start: corrupt event log at seq " << e.seq() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
    return 1;
  }
}
