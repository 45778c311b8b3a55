#pragma once

#include "govlab/identity/identity.hpp"
#include "govlab/ledger/token_ledger.hpp"
#include "govlab/spaces/governance.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace govlab::experiment {

using identity::Address;

/// One cell of the 2x2 design.
struct Condition {
  spaces::VotingMethod method = spaces::VotingMethod::kQuadratic;
  ledger::PowerKind power = ledger::PowerKind::kEqual;

  /// "qe", "qp", "we", "wp".
  std::string code() const;
  /// "quadratic+equal", "quadratic+20/80", ...
  std::string label() const;
  auto operator<=>(const Condition&) const = default;
};

/// Reporting order: quadratic+equal, quadratic+20/80, weighted+equal, weighted+20/80.
inline constexpr std::array<Condition, 4> kConditions = {{
    {spaces::VotingMethod::kQuadratic, ledger::PowerKind::kEqual},
    {spaces::VotingMethod::kQuadratic, ledger::PowerKind::kPareto2080},
    {spaces::VotingMethod::kWeighted, ledger::PowerKind::kEqual},
    {spaces::VotingMethod::kWeighted, ledger::PowerKind::kPareto2080},
}};

/// Throws InvalidArgument "BAD_CONDITION".
Condition parse_condition(std::string_view code);
std::size_t condition_index(const Condition& c);

struct AssignmentPlan {
  std::uint64_t seed = 0;
  std::map<Address, Condition> assignment;
  std::array<std::size_t, 4> counts{};

  std::vector<Address> members(const Condition& c) const;
};

/// Block randomization: participants are put in canonical order, shuffled by
/// the seed, then dealt into blocks of four, each block taking an independent
/// random permutation of the conditions. Counts differ by at most one.
AssignmentPlan assign(const std::vector<Address>& participants, std::uint64_t seed);

}  // namespace govlab::experiment
