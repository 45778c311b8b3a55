#include "govlab/experiment/assignment.hpp"

#include "govlab/core/error.hpp"
#include "govlab/core/rng.hpp"

#include <algorithm>

namespace govlab::experiment {

std::string Condition::code() const {
  std::string c;
  c += method == spaces::VotingMethod::kQuadratic ? 'q' : 'w';
  c += power == ledger::PowerKind::kEqual ? 'e' : 'p';
  return c;
}

std::string Condition::label() const {
  return std::string(spaces::to_string(method)) + (power == ledger::PowerKind::kEqual ? "+equal" : "+20/80");
}

Condition parse_condition(std::string_view code) {
  for (const auto& c : kConditions) {
    if (c.code() == code || c.label() == code) return c;
  }
  throw Error(ErrorKind::kInvalidArgument, "BAD_CONDITION",
              "unknown condition '" + std::string(code) + "' (expected qe, qp, we or wp)");
}

std::size_t condition_index(const Condition& c) {
  return static_cast<std::size_t>(std::find(kConditions.begin(), kConditions.end(), c) - kConditions.begin());
}

std::vector<Address> AssignmentPlan::members(const Condition& c) const {
  std::vector<Address> out;
  for (const auto& [addr, cond] : assignment) {
    if (cond == c) out.push_back(addr);
  }
  return out;
}

AssignmentPlan assign(const std::vector<Address>& participants, std::uint64_t seed) {
  if (participants.empty()) throw Error(ErrorKind::kInvalidArgument, "NO_PARTICIPANTS", "participant list is empty");
  std::vector<Address> order = participants;
  std::sort(order.begin(), order.end());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw Error(ErrorKind::kInvalidArgument, "DUPLICATE_PARTICIPANT", "participant list contains duplicates");
  }

  SeededRng rng(seed);
  rng.shuffle(order);

  AssignmentPlan plan;
  plan.seed = seed;
  std::vector<std::size_t> block = {0, 1, 2, 3};
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i % 4 == 0) {
      block = {0, 1, 2, 3};
      rng.shuffle(block);
    }
    const std::size_t c = block[i % 4];
    plan.assignment.emplace(order[i], kConditions[c]);
    ++plan.counts[c];
  }
  return plan;
}

}  // namespace govlab::experiment
