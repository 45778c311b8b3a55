#include "govlab/tally/tally.hpp"

#include "govlab/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace govlab::tally {

std::uint64_t Ballot::spent() const {
  std::uint64_t s = 0;
  for (auto a : allocation) s += a;
  return s;
}

Json Ballot::to_json() const {
  Json j;
  j["proposal_id"] = proposal_id;
  j["voter"] = voter;
  j["allocation"] = allocation;
  j["cast_at"] = cast_at;
  return j;
}

Ballot Ballot::from_json(const Json& j) {
  try {
    Ballot b;
    b.proposal_id = j.at("proposal_id").get<std::string>();
    b.voter = j.at("voter").get<std::string>();
    b.allocation = j.at("allocation").get<std::vector<std::uint64_t>>();
    b.cast_at = j.at("cast_at").get<TimestampMs>();
    return b;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_BALLOT", e.what());
  }
}

std::string Ballot::canonical_payload() const { return canonical_string(to_json()); }

SignedBallot sign_ballot(const identity::Identity& voter, Ballot ballot) {
  ballot.voter = voter.address();
  auto msg = voter.sign(ballot.canonical_payload());
  return {std::move(ballot), std::move(msg.signature)};
}

std::string_view to_string(Rejection r) {
  switch (r) {
    case Rejection::kBadSignature: return "BAD_SIGNATURE";
    case Rejection::kClosed: return "CLOSED";
    case Rejection::kOverBudget: return "OVER_BUDGET";
    case Rejection::kLengthMismatch: return "LENGTH_MISMATCH";
    case Rejection::kUnknownVoter: return "UNKNOWN_VOTER";
  }
  return "?";
}

std::optional<Rejection> validate_ballot(const SignedBallot& signed_ballot, const spaces::Proposal& proposal,
                                         const ledger::LedgerSnapshot& snapshot,
                                         std::span<const std::uint8_t> public_key) {
  const Ballot& b = signed_ballot.ballot;
  if (public_key.size() != identity::kPublicKeySize || identity::derive_address(public_key) != b.voter) {
    return Rejection::kBadSignature;
  }
  if (!identity::verify(to_bytes(b.canonical_payload()), signed_ballot.signature, public_key)) {
    return Rejection::kBadSignature;
  }
  if (b.proposal_id != proposal.id) return Rejection::kBadSignature;
  if (b.allocation.size() != proposal.options.size()) return Rejection::kLengthMismatch;
  if (!proposal.accepts_at(b.cast_at)) return Rejection::kClosed;
  const auto budget = ledger::balance(snapshot, b.voter);
  const auto spent = b.spent();
  if (budget == 0 && spent > 0) return Rejection::kUnknownVoter;
  if (spent > budget) return Rejection::kOverBudget;
  return std::nullopt;
}

bool BallotBox::record(const Ballot& ballot) {
  std::lock_guard lock(mu_);
  auto [it, inserted] = latest_.try_emplace(ballot.voter, ballot);
  if (inserted) return true;
  if (ballot.cast_at < it->second.cast_at) return false;
  it->second = ballot;
  return true;
}

std::vector<Ballot> BallotBox::latest() const {
  std::lock_guard lock(mu_);
  std::vector<Ballot> out;
  out.reserve(latest_.size());
  for (const auto& [_, b] : latest_) out.push_back(b);
  return out;
}

std::optional<Ballot> BallotBox::latest_for(const Address& voter) const {
  std::lock_guard lock(mu_);
  auto it = latest_.find(voter);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

std::size_t BallotBox::voters() const {
  std::lock_guard lock(mu_);
  return latest_.size();
}

double effective_votes_quadratic(std::uint64_t tokens) { return std::sqrt(static_cast<double>(tokens)); }

double effective_votes(VotingMethod method, std::uint64_t tokens) {
  return method == VotingMethod::kQuadratic ? effective_votes_quadratic(tokens) : static_cast<double>(tokens);
}

RadicalTerm split_square(std::uint64_t n) {
  if (n == 0) return {0, 1};
  std::uint64_t outside = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    const std::uint64_t sq = d * d;
    while (n % sq == 0) {
      n /= sq;
      outside *= d;
    }
  }
  return {outside, n};
}

namespace {

double to_double(const ExactScore& s) {
  double v = 0;
  for (const auto& [radicand, coeff] : s) {
    v += static_cast<double>(coeff) * (radicand == 1 ? 1.0 : std::sqrt(static_cast<double>(radicand)));
  }
  return v;
}

}  // namespace

TallyResult tally_unchecked(const std::string& proposal_id, std::size_t option_count, std::span<const Ballot> ballots,
                            VotingMethod method, Ratio success_threshold) {
  std::set<Address> seen;
  std::vector<ExactScore> exact(option_count);
  for (const auto& b : ballots) {
    if (!seen.insert(b.voter).second) {
      throw Error(ErrorKind::kInvalidArgument, "DUPLICATE_VOTER", "more than one ballot from " + b.voter);
    }
    if (b.allocation.size() != option_count) {
      throw Error(ErrorKind::kInvalidArgument, "LENGTH_MISMATCH", "ballot from " + b.voter + " has wrong length");
    }
    for (std::size_t j = 0; j < option_count; ++j) {
      const auto tokens = b.allocation[j];
      if (tokens == 0) continue;
      if (method == VotingMethod::kWeighted) {
        exact[j][1] += tokens;
      } else {
        auto term = split_square(tokens);
        exact[j][term.squarefree] += term.outside;
      }
    }
  }

  TallyResult r;
  r.proposal_id = proposal_id;
  r.method = method;
  r.turnout = ballots.size();
  r.scores.reserve(option_count);
  for (const auto& e : exact) r.scores.push_back(to_double(e));
  for (double s : r.scores) r.total_effective += s;

  if (option_count > 0) {
    const auto best = static_cast<std::size_t>(std::max_element(r.scores.begin(), r.scores.end()) - r.scores.begin());
    for (std::size_t j = 0; j < option_count; ++j) {
      if (exact[j] == exact[best]) r.winner.indices.push_back(j);
    }
  }

  const double num = static_cast<double>(success_threshold.num);
  const double den = static_cast<double>(success_threshold.den);
  for (double s : r.scores) r.succeeded.push_back(r.total_effective > 0 && s * den >= num * r.total_effective);
  return r;
}

TallyResult tally(const spaces::Proposal& proposal, std::span<const Ballot> ballots, VotingMethod method,
                  Ratio success_threshold) {
  if (proposal.status != spaces::ProposalStatus::kClosed && proposal.status != spaces::ProposalStatus::kPublished) {
    throw Error(ErrorKind::kConflict, "NOT_CLOSED", "proposal " + proposal.id + " is not closed");
  }
  for (const auto& b : ballots) {
    if (b.proposal_id != proposal.id) {
      throw Error(ErrorKind::kInvalidArgument, "WRONG_PROPOSAL", "ballot belongs to " + b.proposal_id);
    }
  }
  return tally_unchecked(proposal.id, proposal.options.size(), ballots, method, success_threshold);
}

Json TallyResult::to_json() const {
  Json j;
  j["proposal_id"] = proposal_id;
  j["method"] = spaces::to_string(method);
  j["scores"] = scores;
  j["turnout"] = turnout;
  j["total_effective"] = total_effective;
  j["winner"] = winner.indices;
  j["tie"] = winner.is_tie();
  j["succeeded"] = succeeded;
  return j;
}

TallyResult TallyResult::from_json(const Json& j) {
  TallyResult r;
  r.proposal_id = j.at("proposal_id").get<std::string>();
  r.method = spaces::parse_voting_method(j.at("method").get<std::string>());
  r.scores = j.at("scores").get<std::vector<double>>();
  r.turnout = j.at("turnout").get<std::size_t>();
  r.total_effective = j.at("total_effective").get<double>();
  r.winner.indices = j.at("winner").get<std::vector<std::size_t>>();
  r.succeeded = j.at("succeeded").get<std::vector<bool>>();
  return r;
}

RatioVector ratio_vector(std::span<const std::uint64_t> allocation) {
  RatioVector rv;
  std::uint64_t total = 0;
  for (auto a : allocation) total += a;
  rv.zero = total == 0;
  rv.values.reserve(allocation.size());
  for (auto a : allocation) {
    rv.values.push_back(rv.zero ? 0.0 : static_cast<double>(a) / static_cast<double>(total));
  }
  return rv;
}

}  // namespace govlab::tally
