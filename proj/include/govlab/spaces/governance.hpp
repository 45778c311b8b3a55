#pragma once

#include "govlab/core/clock.hpp"
#include "govlab/core/ratio.hpp"
#include "govlab/identity/identity.hpp"
#include "govlab/ledger/token_ledger.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace govlab::spaces {

using identity::Address;

enum class VotingMethod { kQuadratic, kWeighted };

std::string_view to_string(VotingMethod m);
VotingMethod parse_voting_method(std::string_view s);

inline constexpr TimestampMs kDefaultVoteDuration = 48 * kHour;
inline constexpr Ratio kDefaultSuccessThreshold{1, 4};

struct SpaceConfig {
  std::string id;
  VotingMethod method = VotingMethod::kQuadratic;
  ledger::PowerPolicy power;
  TimestampMs vote_duration = kDefaultVoteDuration;
  Ratio success_threshold = kDefaultSuccessThreshold;
  std::set<Address> admins;
  std::set<Address> moderators;
  /// Experiment condition label ("qe", "qp", "we", "wp"); empty outside experiments.
  std::string condition;

  friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;
};

struct Space {
  SpaceConfig config;
  TimestampMs created_at = 0;

  bool is_admin(const Address& a) const { return config.admins.contains(a); }
  friend bool operator==(const Space&, const Space&) = default;
};

enum class ProposalStatus { kDraft, kOpen, kClosed, kPublished };

std::string_view to_string(ProposalStatus s);

struct Proposal {
  std::string id;
  std::string space_id;
  std::vector<std::string> options;
  TimestampMs open_at = 0;
  TimestampMs close_at = 0;
  ProposalStatus status = ProposalStatus::kDraft;
  ledger::LedgerSnapshot snapshot;
  Digest snapshot_ref{};
  std::optional<TimestampMs> closed_at;
  bool force_closed = false;

  /// True when a ballot stamped `t` falls inside [open_at, close_at) and the proposal is OPEN.
  bool accepts_at(TimestampMs t) const { return status == ProposalStatus::kOpen && t >= open_at && t < close_at; }
  friend bool operator==(const Proposal&, const Proposal&) = default;
};

/// Owns spaces and proposals. Mutations are serialized; getters return copies.
class GovernanceRegistry {
 public:
  /// The caller is added to the admin set. Throws on invalid duration or threshold.
  Space create_space(SpaceConfig config, const Address& caller, TimestampMs now);

  /// Opens immediately: DRAFT -> OPEN, close_at = now + vote_duration.
  /// Requires caller to be an admin and a frozen snapshot for the space.
  Proposal open_proposal(const std::string& space_id, std::vector<std::string> options, const Address& caller,
                         TimestampMs now, const std::optional<ledger::LedgerSnapshot>& snapshot);

  /// Before close_at only an admin with `force` may close; the flag is kept on the proposal.
  Proposal close_proposal(const std::string& proposal_id, TimestampMs now, const Address& caller, bool force = false);

  /// CLOSED -> PUBLISHED.
  Proposal publish(const std::string& proposal_id);

  Space space(const std::string& id) const;
  bool has_space(const std::string& id) const;
  Proposal proposal(const std::string& id) const;
  std::vector<Space> spaces() const;
  std::vector<Proposal> proposals() const;
  std::vector<Proposal> proposals_in(const std::string& space_id) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, Space> spaces_;
  std::map<std::string, Proposal> proposals_;
  std::map<std::string, std::size_t> proposal_counter_;
};

}  // namespace govlab::spaces
