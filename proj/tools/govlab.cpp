// Operator and research CLI. State lives in --out: events.jsonl (the chain)
// and cli.json (seed and population size). The clock is virtual: each
// invocation resumes one second after the last recorded event.

#include "govlab/chain/audit_chain.hpp"
#include "govlab/core/error.hpp"
#include "govlab/experiment/summary.hpp"
#include "govlab/experiment/survey.hpp"
#include "govlab/gateway/config.hpp"
#include "govlab/gateway/store.hpp"
#include "govlab/sim/population.hpp"
#include "govlab/sim/simulate.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace govlab;
using identity::Address;

namespace {

struct Args {
  std::string config;
  std::string out = "govlab-out";
  std::optional<std::uint64_t> seed;
  std::string condition;  // empty: all configured
  std::size_t participants = 8;
  std::string population = "default";
  std::size_t n = 40;
  bool force = false;
  bool no_publish = false;
  std::string log;
};

struct CliState {
  std::uint64_t seed = 0;
  std::size_t participants = 0;
};

constexpr const char* kStateFile = "cli.json";
constexpr TimestampMs kStep = 1'000;

gateway::ApiConfig load(const Args& a) {
  auto cfg = a.config.empty() ? gateway::parse_config("") : gateway::load_config(a.config);
  gateway::check_paths(cfg);
  return cfg;
}

CliState read_state(const Args& a) {
  const auto path = fs::path(a.out) / kStateFile;
  if (!fs::exists(path)) {
    throw Error(ErrorKind::kNotFound, "NOT_INITIALIZED", "no experiment in " + a.out + "; run init first");
  }
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto j = parse_json(ss.str());
  return {j.at("seed").get<std::uint64_t>(), j.at("participants").get<std::size_t>()};
}

// Opens the store with a manual clock parked just after the last event.
struct Session {
  gateway::ApiConfig config;
  CliState state;
  identity::Identity op;
  std::unique_ptr<ManualClock> clock;
  std::unique_ptr<gateway::EventStore> store;

  gateway::Platform& platform() { return store->platform(); }
};

Session open_session(const Args& a, const CliState& state) {
  auto config = load(a);
  auto op = sim::operator_identity(state.seed);
  auto options = gateway::platform_options(config, std::make_shared<deliberation::EchoResponder>());
  options.operators.insert(op.address());
  auto clock = std::make_unique<ManualClock>(sim::kSimEpoch);
  auto store = gateway::EventStore::open(a.out, options, clock->as_clock(), config.snapshot_every);
  if (auto last = store->platform().chain().last()) clock->set(std::max(sim::kSimEpoch, last->timestamp + kStep));
  return Session{std::move(config), state, std::move(op), std::move(clock), std::move(store)};
}

std::vector<experiment::Condition> selected(const Args& a, const gateway::ApiConfig& cfg) {
  std::vector<experiment::Condition> out;
  if (!a.condition.empty()) {
    out.push_back(experiment::parse_condition(a.condition));
    return out;
  }
  for (const auto& s : cfg.spaces) out.push_back(s.condition);
  return out;
}

std::optional<spaces::Proposal> open_proposal_in(const gateway::Platform& p, const std::string& space_id) {
  for (const auto& prop : p.proposals()) {
    if (prop.space_id == space_id && prop.status == spaces::ProposalStatus::kOpen) return prop;
  }
  return std::nullopt;
}

// ---- subcommands ------------------------------------------------------------

int cmd_init(const Args& a) {
  auto cfg = load(a);
  if (fs::exists(fs::path(a.out) / gateway::kEventsFile) || fs::exists(fs::path(a.out) / kStateFile)) {
    throw Error(ErrorKind::kConflict, "ALREADY_INITIALIZED", a.out + " already holds an experiment");
  }
  if (a.participants == 0) throw Error(ErrorKind::kInvalidArgument, "BAD_ARGS", "--participants must be positive");
  CliState st{a.seed.value_or(cfg.assignment_seed), a.participants};
  fs::create_directories(a.out);
  {
    std::ofstream out(fs::path(a.out) / kStateFile);
    out << Json{{"seed", st.seed}, {"participants", st.participants}}.dump() << '\n';
  }
  auto s = open_session(a, st);
  auto& p = s.platform();
  p.register_participant(s.op.public_key());
  for (std::size_t i = 0; i < st.participants; ++i) {
    s.clock->advance(kStep);
    p.register_participant(sim::voter_identity(st.seed, i).public_key());
  }
  for (const auto& sc : s.config.spaces) {
    s.clock->advance(kStep);
    p.create_space(gateway::space_config_for(sc, s.config.mint_seed), s.op.address());
  }
  s.clock->advance(kStep);
  const auto plan = p.assign_conditions(st.seed, s.op.address());
  s.store->maybe_snapshot();
  std::cout << "initialized " << a.out << ": " << st.participants << " participants, " << s.config.spaces.size()
            << " spaces\n";
  for (const auto& c : experiment::kConditions) {
    std::cout << "  " << c.code() << " (" << c.label() << "): " << plan.counts[experiment::condition_index(c)] << '\n';
  }
  return 0;
}

int cmd_mint(const Args& a) {
  auto s = open_session(a, read_state(a));
  auto& p = s.platform();
  const auto plan = p.assignment();
  for (const auto& c : selected(a, s.config)) {
    const auto id = gateway::space_id_for(c);
    if (plan && plan->members(c).empty()) {
      std::cout << id << ": no participants assigned, skipped\n";
      continue;
    }
    s.clock->advance(kStep);
    const auto grants = p.mint(id, s.op.address());
    ledger::Amount total = 0;
    for (const auto& g : grants) total += g.amount;
    std::cout << id << ": minted " << total << " tokens to " << grants.size() << " participants\n";
  }
  s.store->maybe_snapshot();
  return 0;
}

int cmd_open(const Args& a) {
  auto s = open_session(a, read_state(a));
  auto& p = s.platform();
  for (const auto& c : selected(a, s.config)) {
    const auto id = gateway::space_id_for(c);
    s.clock->advance(kStep);
    const auto prop = p.open_proposal(id, s.config.proposal_options, s.op.address());
    std::cout << prop.id << ": open until " << prop.close_at << '\n';
  }
  s.store->maybe_snapshot();
  return 0;
}

sim::PopulationSpec population_for(const std::string& name, std::size_t n, std::size_t options, std::uint64_t seed) {
  if (name == "default") return sim::default_spec(n, options, seed);
  if (name == "symmetric") return sim::symmetric_spec(n, options, seed);
  if (name == "unanimous") return sim::unanimous_spec(n, 1, options, seed);
  if (name == "whale") return sim::whale_spec(seed);
  throw Error(ErrorKind::kInvalidArgument, "BAD_ARGS", "unknown population " + name);
}

int cmd_simulate(const Args& a) {
  auto s = open_session(a, read_state(a));
  auto& p = s.platform();
  const auto plan = p.assignment();
  if (!plan) throw Error(ErrorKind::kConflict, "NOT_ASSIGNED", "no condition assignment");

  // Archetypes by voter index, from the same identities init registered.
  auto spec = population_for(a.population, s.state.participants, s.config.proposal_options.size(), s.state.seed);
  if (spec.n != s.state.participants) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_ARGS", "population " + a.population + " needs " +
                                                             std::to_string(spec.n) + " participants");
  }
  spec.options = s.config.proposal_options;
  std::map<Address, const sim::Voter*> by_address;
  const auto voters = sim::build_population(spec);
  for (const auto& v : voters) by_address[v.identity.address()] = &v;

  for (const auto& c : selected(a, s.config)) {
    const auto id = gateway::space_id_for(c);
    const auto prop = open_proposal_in(p, id);
    if (!prop) throw Error(ErrorKind::kConflict, "NO_OPEN_PROPOSAL", "no open proposal in " + id);
    const auto members = plan->members(c);
    sim::deliberate(p, *s.clock, members);
    std::size_t cast = 0;
    for (const auto& m : members) {
      const auto* v = by_address.at(m);
      s.clock->advance(kStep);
      auto ballot = sim::make_ballot(prop->id, m, spec.archetypes[v->archetype].weights,
                                     ledger::balance(prop->snapshot, m), s.clock->now());
      p.cast_ballot(tally::sign_ballot(v->identity, std::move(ballot)));
      ++cast;
    }
    std::cout << prop->id << ": " << cast << " ballots cast\n";
  }
  s.store->maybe_snapshot();
  return 0;
}

int cmd_close(const Args& a) {
  auto s = open_session(a, read_state(a));
  auto& p = s.platform();
  for (const auto& c : selected(a, s.config)) {
    const auto id = gateway::space_id_for(c);
    const auto prop = open_proposal_in(p, id);
    if (!prop) throw Error(ErrorKind::kConflict, "NO_OPEN_PROPOSAL", "no open proposal in " + id);
    if (!a.force && s.clock->now() < prop->close_at) s.clock->set(prop->close_at);
    p.close_proposal(prop->id, s.op.address(), a.force);
    std::cout << prop->id << ": closed\n";
    if (!a.no_publish) {
      s.clock->advance(kStep);
      const auto result = p.publish(prop->id, s.op.address());
      std::cout << prop->id << ": published, winner";
      for (auto w : result.winner.indices) std::cout << ' ' << w + 1;
      std::cout << (result.winner.is_tie() ? " (tie)" : "") << ", turnout " << result.turnout << '\n';
    }
  }
  s.store->maybe_snapshot();
  return 0;
}

int cmd_report(const Args& a) {
  auto s = open_session(a, read_state(a));
  auto& p = s.platform();

  std::size_t ballots = 0;
  for (const auto& prop : p.proposals()) {
    if (prop.status == spaces::ProposalStatus::kPublished) ballots += p.result(prop.id)->turnout;
  }
  if (ballots == 0) throw Error(ErrorKind::kConflict, "EMPTY", "no published proposal has ballots");

  const auto summary = p.condition_summary();
  {
    std::ofstream out(fs::path(a.out) / "table3.csv");
    experiment::write_summary_csv(summary, out);
  }
  {
    std::ofstream out(fs::path(a.out) / "tally.csv");
    out << "proposal,condition,option,score,winner,succeeded\n";
    for (const auto& prop : p.proposals()) {
      auto r = p.result(prop.id);
      if (!r) continue;
      const auto cond = p.space(prop.space_id).config.condition;
      for (std::size_t i = 0; i < r->scores.size(); ++i) {
        const bool win = std::find(r->winner.indices.begin(), r->winner.indices.end(), i) != r->winner.indices.end();
        out << prop.id << ',' << cond << ',' << i + 1 << ',' << experiment::format_number(r->scores[i]) << ','
            << (win ? 1 : 0) << ',' << (r->succeeded[i] ? 1 : 0) << '\n';
      }
    }
  }
  const auto surveys = p.surveys_by_condition();
  if (!surveys.empty()) {
    std::ofstream out(fs::path(a.out) / "surveys.txt");
    out << "likert " << experiment::format_likert_line(experiment::likert_summary(surveys)) << '\n';
    for (const auto& d : experiment::vdem_aggregate(surveys)) {
      out << d.dimension << ' ' << experiment::format_likert_line(d.by_condition) << '\n';
    }
  }
  experiment::write_summary_csv(summary, std::cout);
  for (const auto& [cond, excluded] : summary.zero_ballots_excluded) {
    if (excluded) std::cerr << cond.code() << ": " << excluded << " all-zero ballots excluded\n";
  }
  return 0;
}

int cmd_verify(const Args& a) {
  const auto path = a.log.empty() ? (fs::path(a.out) / gateway::kEventsFile).string() : a.log;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "NO_LOG", "cannot read " + path);
  try {
    const auto events = chain::import_jsonl(in);
    std::cout << "OK " << events.size() << " events";
    if (!events.empty()) std::cout << ", head " << to_hex(events.back().hash);
    std::cout << '\n';
    return 0;
  } catch (const chain::BrokenChain& e) {
    std::cout << "BROKEN seq " << e.seq() << " " << e.code() << ": " << e.what() << '\n';
    return 1;
  }
}

int cmd_compare(const Args& a) {
  auto spec = population_for(a.population, a.n, 4, a.seed.value_or(0));
  const auto cmp = sim::compare_methods(spec);
  fs::create_directories(a.out);
  {
    std::ofstream out(fs::path(a.out) / "compare.csv");
    sim::write_comparison_csv(cmp, out);
  }
  {
    std::ofstream out(fs::path(a.out) / "summary.csv");
    sim::write_runs_csv(cmp.runs, out);
  }
  sim::write_comparison_csv(cmp, std::cout);
  return 0;
}

int cmd_pipeline(Args a) {
  if (int rc = cmd_init(a)) return rc;
  for (auto* step : {cmd_mint, cmd_open, cmd_simulate, cmd_close, cmd_report}) {
    if (int rc = step(a)) return rc;
  }
  return cmd_verify(a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"govlab: experiment operator and simulation CLI"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", a.config, "config file (key = value)");
    sub->add_option("--out", a.out, "state and artifact directory");
    sub->add_option("--seed", a.seed, "identity and assignment seed");
    sub->add_option("--condition", a.condition, "restrict to one condition")
        ->check(CLI::IsMember({"qe", "qp", "we", "wp"}));
  };

  auto* init = app.add_subcommand("init", "register synthetic participants, create spaces, assign conditions");
  common(init);
  init->add_option("--participants", a.participants, "number of synthetic participants");
  auto* mint = app.add_subcommand("mint", "mint tokens in each space");
  common(mint);
  auto* open = app.add_subcommand("open", "open a proposal in each space");
  common(open);
  auto* simulate = app.add_subcommand("simulate", "deliberate and vote for every synthetic participant");
  common(simulate);
  simulate->add_option("--population", a.population, "default | symmetric | unanimous | whale");
  auto* close = app.add_subcommand("close", "close (and publish) open proposals");
  common(close);
  close->add_flag("--force", a.force, "close before the voting window ends");
  close->add_flag("--no-publish", a.no_publish, "close without publishing");
  auto* report = app.add_subcommand("report", "write table3.csv, tally.csv and surveys.txt");
  common(report);
  auto* verify = app.add_subcommand("verify-chain", "verify an events.jsonl log");
  common(verify);
  verify->add_option("--log", a.log, "log file (default <out>/events.jsonl)");
  auto* compare = app.add_subcommand("compare", "compare voting methods on a synthetic population");
  common(compare);
  compare->add_option("--population", a.population, "default | symmetric | unanimous | whale");
  compare->add_option("-n", a.n, "population size");
  auto* pipeline = app.add_subcommand("pipeline", "init, mint, open, simulate, close, report, verify-chain");
  common(pipeline);
  pipeline->add_option("--participants", a.participants, "number of synthetic participants");
  pipeline->add_option("--population", a.population, "default | symmetric | unanimous | whale");

  CLI11_PARSE(app, argc, argv);

  try {
    if (init->parsed()) return cmd_init(a);
    if (mint->parsed()) return cmd_mint(a);
    if (open->parsed()) return cmd_open(a);
    if (simulate->parsed()) return cmd_simulate(a);
    if (close->parsed()) return cmd_close(a);
    if (report->parsed()) return cmd_report(a);
    if (verify->parsed()) return cmd_verify(a);
    if (compare->parsed()) return cmd_compare(a);
    if (pipeline->parsed()) return cmd_pipeline(a);
  } catch (const chain::BrokenChain& e) {
    std::cerr << "error: BROKEN_CHAIN seq " << e.seq() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
