#pragma once

#include "govlab/core/bytes.hpp"
#include "govlab/core/clock.hpp"
#include "govlab/core/ratio.hpp"
#include "govlab/identity/identity.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace govlab::ledger {

using identity::Address;
using Amount = std::uint64_t;

enum class PowerKind { kEqual, kPareto2080 };

std::string_view to_string(PowerKind kind);
PowerKind parse_power_kind(std::string_view s);

struct PowerPolicy {
  PowerKind kind = PowerKind::kEqual;
  Amount total_supply = 0;
  Ratio top_fraction{1, 5};
  Ratio top_share{4, 5};
  std::uint64_t rng_seed = 0;

  /// Checks the fractions and that total_supply covers `participants`.
  void validate(std::size_t participants) const;
  friend bool operator==(const PowerPolicy&, const PowerPolicy&) = default;
};

/// Default budget scale: 100 tokens per head.
inline constexpr Amount kTokensPerHead = 100;

struct TokenGrant {
  std::string space_id;
  Address address;
  Amount amount = 0;
  friend bool operator==(const TokenGrant&, const TokenGrant&) = default;
};

/// Each participant gets total/n; the first total%n addresses in sorted order get one more.
/// Grants are returned in sorted-address order.
std::vector<TokenGrant> mint_equal(const std::string& space_id, const std::vector<Address>& participants,
                                   Amount total_supply);

/// The ceil(top_fraction * n) addresses drawn by the seeded sampler.
std::vector<Address> select_adopters(const std::vector<Address>& participants, const PowerPolicy& policy);

/// Adopters split floor(top_share * total) by the equal rule, everyone else the remainder.
std::vector<TokenGrant> mint_pareto(const std::string& space_id, const std::vector<Address>& participants,
                                    const PowerPolicy& policy);

/// Dispatches on policy.kind.
std::vector<TokenGrant> mint(const std::string& space_id, const std::vector<Address>& participants,
                             const PowerPolicy& policy);

struct LedgerSnapshot {
  std::string space_id;
  TimestampMs frozen_at = 0;
  std::map<Address, Amount> balances;

  Amount total() const;
  /// SHA-256 over the canonical encoding; referenced by proposals.
  Digest digest() const;
  friend bool operator==(const LedgerSnapshot&, const LedgerSnapshot&) = default;
};

/// Grant amount, or 0 for an address outside the snapshot.
Amount balance(const LedgerSnapshot& snapshot, const Address& address);

/// Minting is serialized per ledger; snapshots are returned by value.
class TokenLedger {
 public:
  /// Makes the space known with no grants yet.
  void declare_space(const std::string& space_id);
  bool has_space(const std::string& space_id) const;
  bool is_minted(const std::string& space_id) const;

  /// Mints and records the grants. A space is minted at most once.
  std::vector<TokenGrant> mint(const std::string& space_id, const std::vector<Address>& participants,
                               const PowerPolicy& policy);

  /// Throws NotFound "UNKNOWN_SPACE" or Conflict "MINT_INCOMPLETE".
  LedgerSnapshot snapshot(const std::string& space_id, TimestampMs at) const;

  std::vector<TokenGrant> grants(const std::string& space_id) const;

 private:
  struct SpaceBalances {
    bool minted = false;
    std::map<Address, Amount> balances;
  };
  mutable std::mutex mu_;
  std::map<std::string, SpaceBalances> spaces_;
};

}  // namespace govlab::ledger
