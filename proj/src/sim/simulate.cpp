#include "govlab/sim/simulate.hpp"

#include "govlab/core/error.hpp"
#include "govlab/gateway/store.hpp"

#include <cmath>
#include <map>

namespace govlab::sim {

using deliberation::SessionEvent;

deliberation::SeedCase builtin_seed_case() {
  deliberation::SeedCase c;
  c.interpretation_text = "A model summarises a contested policy debate and picks a side.";
  c.value_question = "Should the model take a side when the question is contested?";
  c.seed_yes = "You think the model may take a side. What would make that acceptable?";
  c.seed_no = "You think the model should stay neutral. What should it do instead?";
  c.seed_maybe = "You are unsure. Which situations would change your mind?";
  c.suggested_topics = {"neutrality", "transparency"};
  return c;
}

namespace {

constexpr TimestampMs kStep = 1'000;

}  // namespace

void deliberate(gateway::Platform& platform, ManualClock& clock, const std::vector<Address>& participants) {
  const auto& gates = platform.options().gates;
  std::vector<Address> cohort;
  for (const auto& a : participants) {
    if (!platform.has_session(a)) cohort.push_back(a);
  }
  if (cohort.empty()) return;
  auto each = [&](auto&& step) {
    clock.advance(kStep);
    for (const auto& a : cohort) step(a);
  };
  each([&](const Address& a) { platform.start_session(a); });
  each([&](const Address& a) { platform.advance_session(a, SessionEvent::kStart); });
  each([&](const Address& a) { platform.advance_session(a, SessionEvent::kIntroDone); });
  each([&](const Address& a) { platform.answer_value_prompt(a, deliberation::ValueAnswer::kMaybe); });
  for (std::size_t t = 0; t < gates.min_ai_turns; ++t) {
    each([&](const Address& a) { platform.ai_turn(a, "Synthetic turn " + std::to_string(t + 1)); });
  }
  each([&](const Address& a) { platform.advance_session(a, SessionEvent::kLeaveChat); });
  each([&](const Address& a) {
    platform.post_room_message(platform.session(a).room_id, a, "Synthetic note from " + a);
  });
  clock.advance(gates.min_room_dwell);
  each([&](const Address& a) { platform.advance_session(a, SessionEvent::kLeaveRoom); });
  experiment::SurveyResponse survey;
  survey.likert_items = {{"understood_method", 4}};
  for (auto d : experiment::kVdemDimensions) survey.vdem_items[std::string(d)] = 3;
  each([&](const Address& a) { platform.submit_survey(a, survey); });
}

tally::Ballot make_ballot(const std::string& proposal_id, const Address& voter, std::span<const double> weights,
                          std::uint64_t balance, TimestampMs at) {
  return tally::Ballot{proposal_id, voter, largest_remainder(weights, balance), at};
}

ConditionRun run_condition(const PopulationSpec& spec, const experiment::Condition& condition) {
  const auto voters = build_population(spec);
  const auto op = operator_identity(spec.seed);

  ManualClock clock(kSimEpoch);
  gateway::PlatformOptions options;
  options.seed_case = builtin_seed_case();
  options.operators = {op.address()};
  options.ai_timeout = std::chrono::seconds(5);
  gateway::Platform platform(options, clock.as_clock());

  platform.register_participant(op.public_key());
  std::vector<Address> members;
  for (const auto& v : voters) members.push_back(platform.register_participant(v.identity.public_key()));

  spaces::SpaceConfig space;
  space.id = gateway::space_id_for(condition);
  space.method = condition.method;
  space.power = spec.policy(condition.power);
  space.condition = condition.code();
  clock.advance(kStep);
  platform.create_space(space, op.address());
  clock.advance(kStep);
  auto grants = platform.mint(space.id, op.address(), members);

  deliberate(platform, clock, members);

  clock.advance(kStep);
  const auto proposal = platform.open_proposal(space.id, spec.options, op.address());

  ConditionRun run;
  run.condition = condition;
  run.grants = grants;
  for (const auto& v : voters) {
    clock.advance(kStep);
    const auto balance = ledger::balance(proposal.snapshot, v.identity.address());
    auto ballot = make_ballot(proposal.id, v.identity.address(), spec.archetypes[v.archetype].weights, balance,
                              clock.now());
    auto signed_ballot = tally::sign_ballot(v.identity, std::move(ballot));
    platform.cast_ballot(signed_ballot);
    run.ballots.push_back(std::move(signed_ballot));
  }

  clock.set(proposal.close_at);
  platform.close_proposal(proposal.id, op.address());
  run.result = platform.publish(proposal.id, op.address());
  run.summary = platform.condition_summary().cells;
  run.events = platform.chain().events(0);
  return run;
}

namespace {

std::vector<double> shares(const std::vector<double>& scores) {
  double total = 0;
  for (double s : scores) total += s;
  std::vector<double> out(scores.size(), 0.0);
  if (total > 0) {
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] / total;
  }
  return out;
}

}  // namespace

MethodComparison compare_methods(const PopulationSpec& spec) {
  MethodComparison cmp;
  for (const auto& c : experiment::kConditions) cmp.runs.push_back(run_condition(spec, c));

  std::size_t agree = 0;
  for (auto power : {ledger::PowerKind::kEqual, ledger::PowerKind::kPareto2080}) {
    const auto& q = cmp.runs[experiment::condition_index({spaces::VotingMethod::kQuadratic, power})];
    const auto& w = cmp.runs[experiment::condition_index({spaces::VotingMethod::kWeighted, power})];
    if (q.result.winner == w.result.winner) ++agree;
    const auto qs = shares(q.result.scores);
    const auto ws = shares(w.result.scores);
    std::vector<double> delta(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) delta[i] = qs[i] - ws[i];
    cmp.share_deltas.push_back(std::move(delta));
  }
  cmp.agreement_rate = static_cast<double>(agree) / 2.0;

  const auto& pareto = cmp.runs[experiment::condition_index({spaces::VotingMethod::kQuadratic,
                                                             ledger::PowerKind::kPareto2080})];
  for (const auto& g : pareto.grants) cmp.whale.tokens = std::max(cmp.whale.tokens, g.amount);
  cmp.whale.quadratic_votes = tally::effective_votes(spaces::VotingMethod::kQuadratic, cmp.whale.tokens);
  cmp.whale.weighted_votes = tally::effective_votes(spaces::VotingMethod::kWeighted, cmp.whale.tokens);
  return cmp;
}

void write_runs_csv(std::span<const ConditionRun> runs, std::ostream& out) {
  experiment::ConditionSummary all;
  std::map<experiment::Condition, const ConditionRun*> by;
  for (const auto& r : runs) by[r.condition] = &r;
  for (const auto& c : experiment::kConditions) {
    if (auto it = by.find(c); it != by.end()) {
      all.cells.insert(all.cells.end(), it->second->summary.begin(), it->second->summary.end());
    }
  }
  experiment::write_summary_csv(all, out);
}

void write_comparison_csv(const MethodComparison& cmp, std::ostream& out) {
  using experiment::format_number;
  out << "section,key,option,value\n";
  const char* powers[] = {"equal", "20/80"};
  for (std::size_t p = 0; p < cmp.share_deltas.size(); ++p) {
    for (std::size_t i = 0; i < cmp.share_deltas[p].size(); ++i) {
      out << "share_delta," << powers[p] << ',' << i + 1 << ',' << format_number(cmp.share_deltas[p][i]) << '\n';
    }
  }
  for (const auto& r : cmp.runs) {
    std::string winners;
    for (auto w : r.result.winner.indices) winners += (winners.empty() ? "" : " ") + std::to_string(w + 1);
    out << "winner," << r.condition.label() << ",," << winners << '\n';
  }
  out << "agreement,rate,," << format_number(cmp.agreement_rate) << '\n';
  out << "whale,tokens,," << cmp.whale.tokens << '\n';
  out << "whale,quadratic_votes,," << format_number(cmp.whale.quadratic_votes) << '\n';
  out << "whale,weighted_votes,," << format_number(cmp.whale.weighted_votes) << '\n';
}

}  // namespace govlab::sim
