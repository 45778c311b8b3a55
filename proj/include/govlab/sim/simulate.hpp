#pragma once

// Runs synthetic populations through the real platform: registration,
// minting, the full deliberation state machine with a stub responder, signed
// ballots through the live validation path, close and publish.

#include "govlab/experiment/assignment.hpp"
#include "govlab/experiment/summary.hpp"
#include "govlab/gateway/platform.hpp"
#include "govlab/sim/population.hpp"
#include "govlab/tally/tally.hpp"

#include <ostream>
#include <vector>

namespace govlab::sim {

inline constexpr TimestampMs kSimEpoch = 1'700'000'000'000;

/// Neutral case text used by simulations and when no seed_case file is configured.
deliberation::SeedCase builtin_seed_case();

/// Drives registered participants through the deliberation happy path to
/// VOTING, step by step as a cohort so they share one room dwell. Participants
/// that already have a session are skipped.
void deliberate(gateway::Platform& platform, ManualClock& clock, const std::vector<Address>& participants);

/// Ballot for a voter with `balance` tokens under archetype `weights`.
tally::Ballot make_ballot(const std::string& proposal_id, const Address& voter, std::span<const double> weights,
                          std::uint64_t balance, TimestampMs at);

struct ConditionRun {
  experiment::Condition condition;
  std::vector<tally::SignedBallot> ballots;
  std::vector<ledger::TokenGrant> grants;
  tally::TallyResult result;
  std::vector<experiment::SummaryCell> summary;  // this condition's rows
  std::vector<chain::ChainEvent> events;
};

/// Deterministic per spec.seed. Throws InvalidArgument "BAD_SPEC".
ConditionRun run_condition(const PopulationSpec& spec, const experiment::Condition& condition);

struct WhaleInfluence {
  std::uint64_t tokens = 0;  // the largest single balance under the Pareto policy
  double quadratic_votes = 0;
  double weighted_votes = 0;
};

struct MethodComparison {
  std::vector<ConditionRun> runs;  // kConditions order
  /// Fraction of power policies (equal, 20/80) where both methods pick the same winner set.
  double agreement_rate = 0;
  /// Per power policy, per option: quadratic score share minus weighted score share.
  std::vector<std::vector<double>> share_deltas;
  WhaleInfluence whale;
};

MethodComparison compare_methods(const PopulationSpec& spec);

/// condition,choice,mean,std,n over several runs, kConditions order.
void write_runs_csv(std::span<const ConditionRun> runs, std::ostream& out);
/// One block per power policy plus the agreement and whale lines.
void write_comparison_csv(const MethodComparison& cmp, std::ostream& out);

}  // namespace govlab::sim
