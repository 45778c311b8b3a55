#include "govlab/gateway/store.hpp"

#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"

#include <filesystem>
#include <sstream>

namespace govlab::gateway {

namespace fs = std::filesystem;

Digest state_digest(const Platform& platform) { return sha256(platform.state_json().dump()); }

std::string EventStore::events_path() const { return (fs::path(dir_) / kEventsFile).string(); }

std::unique_ptr<EventStore> EventStore::open(const std::string& data_dir, PlatformOptions options, Clock clock,
                                             std::size_t snapshot_every) {
  std::error_code ec;
  fs::create_directories(data_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "MKDIR_FAILED", data_dir + ": " + ec.message());

  std::unique_ptr<EventStore> store(new EventStore());
  store->dir_ = data_dir;
  store->snapshot_every_ = snapshot_every;

  std::vector<chain::ChainEvent> events;
  if (fs::exists(store->events_path())) events = chain::load_jsonl_file(store->events_path());

  std::optional<std::pair<std::uint64_t, std::string>> snapshot;
  const auto snap_path = fs::path(data_dir) / kSnapshotFile;
  if (fs::exists(snap_path)) {
    std::ifstream in(snap_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const Json j = parse_json(ss.str());
    snapshot = {j.at("seq").get<std::uint64_t>(), j.at("digest").get<std::string>()};
    if (events.empty() || snapshot->first >= events.size()) {
      throw Error(ErrorKind::kCorrupt, "SNAPSHOT_MISMATCH",
                  "snapshot at seq " + std::to_string(snapshot->first) + " is past the end of the event log");
    }
  }

  store->platform_ = Platform::replay(std::move(options), std::move(clock), std::move(events),
                                      [&](const Platform& p, const chain::ChainEvent& ev) {
                                        if (snapshot && ev.seq == snapshot->first &&
                                            to_hex(state_digest(p)) != snapshot->second) {
                                          throw Error(ErrorKind::kCorrupt, "SNAPSHOT_MISMATCH",
                                                      "replayed state differs from snapshot at seq " +
                                                          std::to_string(ev.seq));
                                        }
                                      });

  store->log_.open(store->events_path(), std::ios::app | std::ios::binary);
  if (!store->log_) throw Error(ErrorKind::kIo, "OPEN_FAILED", "cannot open " + store->events_path());
  store->platform_->set_event_sink([s = store.get()](const chain::ChainEvent& ev) { s->persist(ev); });
  return store;
}

void EventStore::persist(const chain::ChainEvent& ev) {
  // Once a write fails the file may hold a partial line; refuse further events.
  if (failed_) throw Error(ErrorKind::kIo, "STORE_FAILED", "event store is read-only after a write failure");
  log_ << chain::to_jsonl_line(ev) << '\n';
  log_.flush();
  if (!log_) {
    failed_ = true;
    throw Error(ErrorKind::kIo, "WRITE_FAILED", "failed appending to " + events_path());
  }
  if (snapshot_every_ != 0 && (ev.seq + 1) % snapshot_every_ == 0) pending_snapshot_ = true;
}

void EventStore::write_snapshot() {
  const auto& chain = platform_->chain();
  if (chain.size() == 0) return;
  Json j{{"seq", chain.size() - 1}, {"digest", to_hex(state_digest(*platform_))}};
  const auto path = fs::path(dir_) / kSnapshotFile;
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump() << '\n';
    if (!out) throw Error(ErrorKind::kIo, "WRITE_FAILED", "failed writing " + tmp);
  }
  fs::rename(tmp, path);
  pending_snapshot_ = false;
}

void EventStore::maybe_snapshot() {
  if (pending_snapshot_) write_snapshot();
}

PlatformOptions platform_options(const ApiConfig& config, std::shared_ptr<deliberation::AiResponder> responder) {
  PlatformOptions o;
  o.gates.min_ai_turns = config.min_ai_turns;
  o.gates.min_room_dwell = config.min_room_dwell;
  o.room_capacity = config.room_capacity;
  if (!config.seed_case_path.empty()) o.seed_case = deliberation::load_seed_case(config.seed_case_path);
  o.responder = std::move(responder);
  o.ai_timeout = config.ai_timeout;
  o.tokens_per_head = config.tokens_per_head;
  o.operators.insert(config.admins.begin(), config.admins.end());
  return o;
}

std::string space_id_for(const experiment::Condition& c) { return "space-" + c.code(); }

spaces::SpaceConfig space_config_for(const ConditionSpaceConfig& c, std::uint64_t mint_seed) {
  spaces::SpaceConfig s;
  s.id = space_id_for(c.condition);
  s.method = c.condition.method;
  s.power.kind = c.condition.power;
  s.power.top_fraction = c.top_fraction;
  s.power.top_share = c.top_share;
  s.power.rng_seed = mint_seed;
  s.vote_duration = c.duration;
  s.success_threshold = c.threshold;
  s.condition = c.condition.code();
  return s;
}

}  // namespace govlab::gateway
