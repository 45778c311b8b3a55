#include "govlab/ledger/token_ledger.hpp"

#include "govlab/core/canonical.hpp"
#include "govlab/core/error.hpp"
#include "govlab/core/rng.hpp"

#include <algorithm>
#include <set>

namespace govlab::ledger {

std::string_view to_string(PowerKind kind) {
  return kind == PowerKind::kEqual ? "equal" : "pareto_20_80";
}

PowerKind parse_power_kind(std::string_view s) {
  if (s == "equal") return PowerKind::kEqual;
  if (s == "pareto_20_80" || s == "pareto" || s == "20/80") return PowerKind::kPareto2080;
  throw Error(ErrorKind::kInvalidArgument, "BAD_POWER_KIND", "unknown power policy '" + std::string(s) + "'");
}

void PowerPolicy::validate(std::size_t participants) const {
  if (!top_fraction.in_open_unit()) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_POLICY", "top_fraction must lie in (0,1)");
  }
  if (!top_share.in_open_unit()) throw Error(ErrorKind::kInvalidArgument, "BAD_POLICY", "top_share must lie in (0,1)");
  if (total_supply < participants) {
    throw Error(ErrorKind::kInvalidArgument, "SUPPLY_TOO_SMALL",
                "total supply " + std::to_string(total_supply) + " is below participant count " +
                    std::to_string(participants));
  }
}

namespace {

std::vector<Address> canonical_participants(const std::vector<Address>& participants) {
  if (participants.empty()) throw Error(ErrorKind::kInvalidArgument, "NO_PARTICIPANTS", "participant list is empty");
  std::vector<Address> sorted = participants;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kInvalidArgument, "DUPLICATE_PARTICIPANT", "participant list contains duplicates");
  }
  return sorted;
}

// `sorted` is already canonical; zero amounts are allowed here.
void split_equal(const std::string& space_id, const std::vector<Address>& sorted, Amount total,
                 std::vector<TokenGrant>& out) {
  if (sorted.empty()) return;
  const Amount n = sorted.size();
  const Amount base = total / n;
  const Amount extra = total % n;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.push_back({space_id, sorted[i], base + (i < extra ? 1 : 0)});
  }
}

Amount ceil_mul(Amount n, const Ratio& r) {
  const auto num = static_cast<Amount>(r.num), den = static_cast<Amount>(r.den);
  return (n * num + den - 1) / den;
}

Amount floor_mul(Amount n, const Ratio& r) {
  return n / static_cast<Amount>(r.den) * static_cast<Amount>(r.num) +
         n % static_cast<Amount>(r.den) * static_cast<Amount>(r.num) / static_cast<Amount>(r.den);
}

}  // namespace

std::vector<TokenGrant> mint_equal(const std::string& space_id, const std::vector<Address>& participants,
                                   Amount total_supply) {
  auto sorted = canonical_participants(participants);
  if (total_supply < sorted.size()) {
    throw Error(ErrorKind::kInvalidArgument, "SUPPLY_TOO_SMALL",
                "total supply " + std::to_string(total_supply) + " is below participant count " +
                    std::to_string(sorted.size()));
  }
  std::vector<TokenGrant> out;
  out.reserve(sorted.size());
  split_equal(space_id, sorted, total_supply, out);
  return out;
}

std::vector<Address> select_adopters(const std::vector<Address>& participants, const PowerPolicy& policy) {
  auto pool = canonical_participants(participants);
  policy.validate(pool.size());
  const auto k = static_cast<std::size_t>(ceil_mul(pool.size(), policy.top_fraction));
  // Partial Fisher-Yates over the sorted list.
  SeededRng rng(policy.rng_seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

std::vector<TokenGrant> mint_pareto(const std::string& space_id, const std::vector<Address>& participants,
                                    const PowerPolicy& policy) {
  auto sorted = canonical_participants(participants);
  auto adopters = select_adopters(sorted, policy);
  std::vector<Address> others;
  std::set_difference(sorted.begin(), sorted.end(), adopters.begin(), adopters.end(), std::back_inserter(others));

  // With nobody outside the adopter set the whole supply stays with the adopters.
  const Amount adopter_pool = others.empty() ? policy.total_supply : floor_mul(policy.total_supply, policy.top_share);

  std::vector<TokenGrant> out;
  out.reserve(sorted.size());
  split_equal(space_id, adopters, adopter_pool, out);
  split_equal(space_id, others, policy.total_supply - adopter_pool, out);
  std::sort(out.begin(), out.end(), [](const TokenGrant& a, const TokenGrant& b) { return a.address < b.address; });
  return out;
}

std::vector<TokenGrant> mint(const std::string& space_id, const std::vector<Address>& participants,
                             const PowerPolicy& policy) {
  if (policy.kind == PowerKind::kPareto2080) return mint_pareto(space_id, participants, policy);
  return mint_equal(space_id, participants, policy.total_supply);
}

Amount LedgerSnapshot::total() const {
  Amount sum = 0;
  for (const auto& [_, amount] : balances) sum += amount;
  return sum;
}

Digest LedgerSnapshot::digest() const {
  Json j;
  j["space_id"] = space_id;
  j["frozen_at"] = frozen_at;
  j["balances"] = balances;
  return sha256(canonical_string(j));
}

Amount balance(const LedgerSnapshot& snapshot, const Address& address) {
  auto it = snapshot.balances.find(address);
  return it == snapshot.balances.end() ? 0 : it->second;
}

void TokenLedger::declare_space(const std::string& space_id) {
  std::lock_guard lock(mu_);
  spaces_.try_emplace(space_id);
}

bool TokenLedger::has_space(const std::string& space_id) const {
  std::lock_guard lock(mu_);
  return spaces_.contains(space_id);
}

bool TokenLedger::is_minted(const std::string& space_id) const {
  std::lock_guard lock(mu_);
  auto it = spaces_.find(space_id);
  return it != spaces_.end() && it->second.minted;
}

std::vector<TokenGrant> TokenLedger::mint(const std::string& space_id, const std::vector<Address>& participants,
                                          const PowerPolicy& policy) {
  std::lock_guard lock(mu_);
  auto it = spaces_.find(space_id);
  if (it == spaces_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_SPACE", "unknown space '" + space_id + "'");
  if (it->second.minted) {
    throw Error(ErrorKind::kConflict, "ALREADY_MINTED", "space '" + space_id + "' has already been minted");
  }
  auto grants = ledger::mint(space_id, participants, policy);
  for (const auto& g : grants) it->second.balances.emplace(g.address, g.amount);
  it->second.minted = true;
  return grants;
}

LedgerSnapshot TokenLedger::snapshot(const std::string& space_id, TimestampMs at) const {
  std::lock_guard lock(mu_);
  auto it = spaces_.find(space_id);
  if (it == spaces_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_SPACE", "unknown space '" + space_id + "'");
  if (!it->second.minted) {
    throw Error(ErrorKind::kConflict, "MINT_INCOMPLETE", "space '" + space_id + "' has not been minted");
  }
  return LedgerSnapshot{space_id, at, it->second.balances};
}

std::vector<TokenGrant> TokenLedger::grants(const std::string& space_id) const {
  std::lock_guard lock(mu_);
  std::vector<TokenGrant> out;
  auto it = spaces_.find(space_id);
  if (it == spaces_.end()) return out;
  for (const auto& [addr, amount] : it->second.balances) out.push_back({space_id, addr, amount});
  return out;
}

}  // namespace govlab::ledger
