#pragma once

// Synthetic voter populations. Voters are archetypes with probability
// weights over options; each spends its whole budget proportionally to its
// weights, rounded to integers by largest remainder.

#include "govlab/identity/identity.hpp"
#include "govlab/ledger/token_ledger.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace govlab::sim {

using identity::Address;

struct Archetype {
  std::string name;
  std::vector<double> weights;  // one per option, >= 0, sum 1
};

struct PopulationSpec {
  std::size_t n = 0;
  std::vector<Archetype> archetypes;
  std::vector<double> mix;  // fraction of voters per archetype, sums to 1
  /// When set, the Pareto adopters (the top_fraction picked by the mint seed)
  /// all take this archetype; the mix applies to everyone else.
  std::optional<std::size_t> adopter_archetype;
  /// Total supply; 0 means 100 tokens per head.
  ledger::Amount total_supply = 0;
  Ratio top_fraction{1, 5};
  Ratio top_share{4, 5};
  std::uint64_t seed = 0;
  std::vector<std::string> options;

  std::size_t option_count() const { return options.size(); }
  ledger::Amount supply() const { return total_supply ? total_supply : ledger::kTokensPerHead * n; }
  ledger::PowerPolicy policy(ledger::PowerKind kind) const;
  /// Throws InvalidArgument "BAD_SPEC".
  void validate() const;
};

/// Integer split of `budget` proportional to `weights`: floors first, then the
/// leftover units go to the largest fractional parts (lower index on ties).
std::vector<std::uint64_t> largest_remainder(std::span<const double> weights, std::uint64_t budget);

/// Counts per archetype for `n` voters, largest remainder over the mix.
std::vector<std::size_t> archetype_counts(std::span<const double> mix, std::size_t n);

struct Voter {
  std::size_t index = 0;
  std::size_t archetype = 0;
  identity::Identity identity;
};

/// Voter i signs with identity_from_label("sim:<seed>:voter:<i>").
identity::Identity voter_identity(std::uint64_t seed, std::size_t index);
identity::Identity operator_identity(std::uint64_t seed);

/// Builds the voters and gives each an archetype. Deterministic in spec.seed.
std::vector<Voter> build_population(const PopulationSpec& spec);

/// Built-in populations.
PopulationSpec unanimous_spec(std::size_t n, std::size_t option, std::size_t options, std::uint64_t seed);
PopulationSpec symmetric_spec(std::size_t n, std::size_t options, std::uint64_t seed);
/// Three voters all-in on option 1 and one whale all-in on option 4. top_share 4/7
/// of 700 tokens gives balances 400/100/100/100 under the Pareto policy.
PopulationSpec whale_spec(std::uint64_t seed);
/// A mixed population for demos and the CLI default.
PopulationSpec default_spec(std::size_t n, std::size_t options, std::uint64_t seed);

}  // namespace govlab::sim
