#pragma once

#include "govlab/core/bytes.hpp"
#include "govlab/core/canonical.hpp"
#include "govlab/core/clock.hpp"
#include "govlab/core/ratio.hpp"
#include "govlab/identity/identity.hpp"
#include "govlab/ledger/token_ledger.hpp"
#include "govlab/spaces/governance.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace govlab::tally {

using identity::Address;
using spaces::VotingMethod;

struct Ballot {
  std::string proposal_id;
  Address voter;
  std::vector<std::uint64_t> allocation;
  TimestampMs cast_at = 0;

  std::uint64_t spent() const;
  Json to_json() const;
  static Ballot from_json(const Json& j);
  /// The exact bytes that get signed.
  std::string canonical_payload() const;
  friend bool operator==(const Ballot&, const Ballot&) = default;
};

struct SignedBallot {
  Ballot ballot;
  Bytes signature;
};

SignedBallot sign_ballot(const identity::Identity& voter, Ballot ballot);

enum class Rejection { kBadSignature, kClosed, kOverBudget, kLengthMismatch, kUnknownVoter };

std::string_view to_string(Rejection r);

/// nullopt means accepted. Checks, in order: signature and voter/key binding,
/// allocation length, voting window, membership, budget.
std::optional<Rejection> validate_ballot(const SignedBallot& ballot, const spaces::Proposal& proposal,
                                         const ledger::LedgerSnapshot& snapshot,
                                         std::span<const std::uint8_t> public_key);

/// Latest-ballot-per-voter store for one proposal. A ballot with an earlier
/// cast_at than the stored one does not replace it.
class BallotBox {
 public:
  /// Returns true if the ballot is now the voter's effective one.
  bool record(const Ballot& ballot);
  std::vector<Ballot> latest() const;
  std::optional<Ballot> latest_for(const Address& voter) const;
  std::size_t voters() const;

 private:
  mutable std::mutex mu_;
  std::map<Address, Ballot> latest_;
};

/// sqrt(tokens). Exact for perfect squares.
double effective_votes_quadratic(std::uint64_t tokens);
double effective_votes(VotingMethod method, std::uint64_t tokens);

/// n = outside^2 * squarefree.
struct RadicalTerm {
  std::uint64_t outside = 0;
  std::uint64_t squarefree = 1;
};
RadicalTerm split_square(std::uint64_t n);

/// An option's score as an integer combination of square roots of distinct
/// square-free integers. Square roots of distinct square-free integers are
/// linearly independent over the rationals, so two scores are equal exactly
/// when these maps are equal.
using ExactScore = std::map<std::uint64_t, std::uint64_t>;

struct Winner {
  std::vector<std::size_t> indices;
  bool is_tie() const { return indices.size() != 1; }
  friend bool operator==(const Winner&, const Winner&) = default;
};

struct TallyResult {
  std::string proposal_id;
  VotingMethod method = VotingMethod::kQuadratic;
  std::vector<double> scores;
  std::size_t turnout = 0;
  double total_effective = 0;
  Winner winner;
  std::vector<bool> succeeded;

  Json to_json() const;
  static TallyResult from_json(const Json& j);
};

/// Pure. Ballots must already be deduplicated (one per voter) and match the
/// proposal's option count; the proposal must be CLOSED or PUBLISHED.
TallyResult tally(const spaces::Proposal& proposal, std::span<const Ballot> ballots, VotingMethod method,
                  Ratio success_threshold);

/// Same computation without the status gate; used by simulators and previews on closed copies.
TallyResult tally_unchecked(const std::string& proposal_id, std::size_t option_count, std::span<const Ballot> ballots,
                            VotingMethod method, Ratio success_threshold);

struct RatioVector {
  std::vector<double> values;
  bool zero = false;  // all-zero allocation; values are all 0
};

RatioVector ratio_vector(std::span<const std::uint64_t> allocation);
inline RatioVector ratio_vector(const Ballot& b) { return ratio_vector(b.allocation); }

}  // namespace govlab::tally
