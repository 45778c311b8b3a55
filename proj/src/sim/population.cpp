#include "govlab/sim/population.hpp"

#include "govlab/core/error.hpp"
#include "govlab/core/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace govlab::sim {

namespace {

constexpr double kSumTolerance = 1e-9;

[[noreturn]] void bad_spec(const std::string& msg) { throw Error(ErrorKind::kInvalidArgument, "BAD_SPEC", msg); }

void check_distribution(std::span<const double> w, const std::string& what) {
  double sum = 0;
  for (double x : w) {
    if (!(x >= 0) || !std::isfinite(x)) bad_spec(what + " has a negative or non-finite weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) bad_spec(what + " does not sum to 1");
}

}  // namespace

ledger::PowerPolicy PopulationSpec::policy(ledger::PowerKind kind) const {
  ledger::PowerPolicy p;
  p.kind = kind;
  p.total_supply = supply();
  p.top_fraction = top_fraction;
  p.top_share = top_share;
  p.rng_seed = seed;
  return p;
}

void PopulationSpec::validate() const {
  if (n == 0) bad_spec("population is empty");
  if (options.size() < 2) bad_spec("need at least two options");
  if (archetypes.empty()) bad_spec("no archetypes");
  if (mix.size() != archetypes.size()) bad_spec("mix and archetypes differ in length");
  for (const auto& a : archetypes) {
    if (a.weights.size() != options.size()) bad_spec("archetype " + a.name + " does not cover every option");
    check_distribution(a.weights, "archetype " + a.name);
  }
  check_distribution(mix, "mix");
  if (adopter_archetype && *adopter_archetype >= archetypes.size()) bad_spec("adopter archetype out of range");
  try {
    policy(ledger::PowerKind::kPareto2080).validate(n);
    policy(ledger::PowerKind::kEqual).validate(n);
  } catch (const Error& e) {
    bad_spec(e.what());
  }
}

std::vector<std::uint64_t> largest_remainder(std::span<const double> weights, std::uint64_t budget) {
  std::vector<std::uint64_t> out(weights.size(), 0);
  if (weights.empty()) return out;
  std::vector<std::pair<double, std::size_t>> rem;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double share = weights[i] * static_cast<double>(budget);
    const auto whole = std::min(budget, static_cast<std::uint64_t>(std::floor(share)));
    out[i] = whole;
    used += whole;
    rem.emplace_back(share - static_cast<double>(whole), i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // Float rounding can push the floors past the budget; take units back from the smallest remainders.
  for (std::size_t k = rem.size(); used > budget; k = k == 0 ? rem.size() : k) {
    --k;
    if (out[rem[k].second] > 0) {
      --out[rem[k].second];
      --used;
    }
  }
  for (std::size_t k = 0; used < budget; k = (k + 1) % rem.size()) {
    ++out[rem[k].second];
    ++used;
  }
  return out;
}

std::vector<std::size_t> archetype_counts(std::span<const double> mix, std::size_t n) {
  auto raw = largest_remainder(mix, n);
  return {raw.begin(), raw.end()};
}

identity::Identity voter_identity(std::uint64_t seed, std::size_t index) {
  return identity::identity_from_label("sim:" + std::to_string(seed) + ":voter:" + std::to_string(index));
}

identity::Identity operator_identity(std::uint64_t seed) {
  return identity::identity_from_label("sim:" + std::to_string(seed) + ":operator");
}

std::vector<Voter> build_population(const PopulationSpec& spec) {
  spec.validate();
  std::vector<Voter> voters;
  voters.reserve(spec.n);
  std::vector<Address> addresses;
  for (std::size_t i = 0; i < spec.n; ++i) {
    voters.push_back(Voter{i, 0, voter_identity(spec.seed, i)});
    addresses.push_back(voters.back().identity.address());
  }

  std::set<Address> adopters;
  if (spec.adopter_archetype) {
    for (auto& a : ledger::select_adopters(addresses, spec.policy(ledger::PowerKind::kPareto2080))) adopters.insert(a);
  }

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < spec.n; ++i) {
    if (adopters.contains(addresses[i])) {
      voters[i].archetype = *spec.adopter_archetype;
    } else {
      rest.push_back(i);
    }
  }
  // Archetype slots dealt in a seeded order so the mix is not tied to voter index.
  std::vector<std::size_t> slots;
  const auto counts = archetype_counts(spec.mix, rest.size());
  for (std::size_t a = 0; a < counts.size(); ++a) slots.insert(slots.end(), counts[a], a);
  SeededRng rng(spec.seed ^ 0x5eedf00dULL);
  rng.shuffle(slots);
  for (std::size_t k = 0; k < rest.size(); ++k) voters[rest[k]].archetype = slots[k];
  return voters;
}

namespace {

std::vector<std::string> numbered_options(std::size_t c) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= c; ++i) out.push_back("Option " + std::to_string(i));
  return out;
}

std::vector<double> all_in(std::size_t option, std::size_t c) {
  std::vector<double> w(c, 0.0);
  w.at(option) = 1.0;
  return w;
}

}  // namespace

PopulationSpec unanimous_spec(std::size_t n, std::size_t option, std::size_t options, std::uint64_t seed) {
  PopulationSpec s;
  s.n = n;
  s.options = numbered_options(options);
  s.archetypes = {{"unanimous", all_in(option, options)}};
  s.mix = {1.0};
  s.seed = seed;
  return s;
}

PopulationSpec symmetric_spec(std::size_t n, std::size_t options, std::uint64_t seed) {
  PopulationSpec s;
  s.n = n;
  s.options = numbered_options(options);
  s.archetypes = {{"uniform", std::vector<double>(options, 1.0 / static_cast<double>(options))}};
  s.mix = {1.0};
  s.seed = seed;
  return s;
}

PopulationSpec whale_spec(std::uint64_t seed) {
  PopulationSpec s;
  s.n = 4;
  s.options = numbered_options(4);
  s.archetypes = {{"crowd", all_in(0, 4)}, {"whale", all_in(3, 4)}};
  s.mix = {1.0, 0.0};
  s.adopter_archetype = 1;
  s.total_supply = 700;
  s.top_fraction = {1, 5};
  s.top_share = {4, 7};
  s.seed = seed;
  return s;
}

PopulationSpec default_spec(std::size_t n, std::size_t options, std::uint64_t seed) {
  PopulationSpec s;
  s.n = n;
  s.options = numbered_options(options);
  std::vector<double> lean(options, 0.0);
  std::vector<double> flat(options, 1.0 / static_cast<double>(options));
  // "lean": half on the first option, the rest spread evenly.
  for (std::size_t i = 0; i < options; ++i) lean[i] = i == 0 ? 0.5 : 0.5 / static_cast<double>(options - 1);
  s.archetypes = {{"lean_first", lean}, {"flat", flat}, {"focused_last", all_in(options - 1, options)}};
  s.mix = {0.5, 0.3, 0.2};
  s.seed = seed;
  return s;
}

}  // namespace govlab::sim
