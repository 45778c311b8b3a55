#include "govlab/spaces/governance.hpp"

#include "govlab/core/error.hpp"

namespace govlab::spaces {

std::string_view to_string(VotingMethod m) { return m == VotingMethod::kQuadratic ? "quadratic" : "weighted"; }

VotingMethod parse_voting_method(std::string_view s) {
  if (s == "quadratic") return VotingMethod::kQuadratic;
  if (s == "weighted") return VotingMethod::kWeighted;
  throw Error(ErrorKind::kInvalidArgument, "BAD_METHOD", "unknown voting method '" + std::string(s) + "'");
}

std::string_view to_string(ProposalStatus s) {
  switch (s) {
    case ProposalStatus::kDraft: return "DRAFT";
    case ProposalStatus::kOpen: return "OPEN";
    case ProposalStatus::kClosed: return "CLOSED";
    case ProposalStatus::kPublished: return "PUBLISHED";
  }
  return "?";
}

namespace {
void advance_status(Proposal& p, ProposalStatus next) {
  if (static_cast<int>(next) != static_cast<int>(p.status) + 1) {
    throw Error(ErrorKind::kConflict, "ILLEGAL_STATUS",
                "proposal " + p.id + " cannot go from " + std::string(to_string(p.status)) + " to " +
                    std::string(to_string(next)));
  }
  p.status = next;
}
}  // namespace

Space GovernanceRegistry::create_space(SpaceConfig config, const Address& caller, TimestampMs now) {
  if (config.id.empty()) throw Error(ErrorKind::kInvalidArgument, "BAD_SPACE_ID", "space id is empty");
  if (config.vote_duration <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_DURATION", "vote duration must be positive");
  }
  if (!config.success_threshold.in_half_open_unit()) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_THRESHOLD", "success threshold must lie in (0,1]");
  }
  if (!caller.empty()) config.admins.insert(caller);
  if (config.admins.empty()) throw Error(ErrorKind::kInvalidArgument, "NO_ADMINS", "space needs at least one admin");

  std::lock_guard lock(mu_);
  if (spaces_.contains(config.id)) {
    throw Error(ErrorKind::kConflict, "SPACE_EXISTS", "space '" + config.id + "' already exists");
  }
  Space space{std::move(config), now};
  spaces_.emplace(space.config.id, space);
  return space;
}

Proposal GovernanceRegistry::open_proposal(const std::string& space_id, std::vector<std::string> options,
                                           const Address& caller, TimestampMs now,
                                           const std::optional<ledger::LedgerSnapshot>& snapshot) {
  std::lock_guard lock(mu_);
  auto it = spaces_.find(space_id);
  if (it == spaces_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_SPACE", "unknown space '" + space_id + "'");
  const Space& space = it->second;
  if (!space.is_admin(caller)) {
    throw Error(ErrorKind::kForbidden, "NOT_ADMIN", caller + " is not an admin of space " + space_id);
  }
  if (options.size() < 2) throw Error(ErrorKind::kInvalidArgument, "TOO_FEW_OPTIONS", "a proposal needs >= 2 options");
  if (!snapshot || snapshot->space_id != space_id) {
    throw Error(ErrorKind::kConflict, "NO_SNAPSHOT", "no ledger snapshot for space " + space_id);
  }

  Proposal p;
  p.id = space_id + "-p" + std::to_string(++proposal_counter_[space_id]);
  p.space_id = space_id;
  p.options = std::move(options);
  p.open_at = now;
  p.close_at = now + space.config.vote_duration;
  p.snapshot = *snapshot;
  p.snapshot_ref = snapshot->digest();
  advance_status(p, ProposalStatus::kOpen);
  proposals_.emplace(p.id, p);
  return p;
}

Proposal GovernanceRegistry::close_proposal(const std::string& proposal_id, TimestampMs now, const Address& caller,
                                            bool force) {
  std::lock_guard lock(mu_);
  auto it = proposals_.find(proposal_id);
  if (it == proposals_.end()) {
    throw Error(ErrorKind::kNotFound, "UNKNOWN_PROPOSAL", "unknown proposal '" + proposal_id + "'");
  }
  Proposal& p = it->second;
  if (p.status != ProposalStatus::kOpen) {
    throw Error(ErrorKind::kConflict, "ALREADY_CLOSED", "proposal " + proposal_id + " is " +
                                                            std::string(to_string(p.status)));
  }
  const bool premature = now < p.close_at;
  if (premature) {
    const bool admin = spaces_.at(p.space_id).is_admin(caller);
    if (force && !admin) throw Error(ErrorKind::kForbidden, "NOT_ADMIN", "only admins may force-close");
    if (!force) {
      throw Error(ErrorKind::kConflict, "PREMATURE_CLOSE", "proposal " + proposal_id + " is open until " +
                                                               std::to_string(p.close_at));
    }
  }
  advance_status(p, ProposalStatus::kClosed);
  p.closed_at = now;
  p.force_closed = premature;
  return p;
}

Proposal GovernanceRegistry::publish(const std::string& proposal_id) {
  std::lock_guard lock(mu_);
  auto it = proposals_.find(proposal_id);
  if (it == proposals_.end()) {
    throw Error(ErrorKind::kNotFound, "UNKNOWN_PROPOSAL", "unknown proposal '" + proposal_id + "'");
  }
  advance_status(it->second, ProposalStatus::kPublished);
  return it->second;
}

Space GovernanceRegistry::space(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = spaces_.find(id);
  if (it == spaces_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_SPACE", "unknown space '" + id + "'");
  return it->second;
}

bool GovernanceRegistry::has_space(const std::string& id) const {
  std::lock_guard lock(mu_);
  return spaces_.contains(id);
}

Proposal GovernanceRegistry::proposal(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = proposals_.find(id);
  if (it == proposals_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_PROPOSAL", "unknown proposal '" + id + "'");
  return it->second;
}

std::vector<Space> GovernanceRegistry::spaces() const {
  std::lock_guard lock(mu_);
  std::vector<Space> out;
  for (const auto& [_, s] : spaces_) out.push_back(s);
  return out;
}

std::vector<Proposal> GovernanceRegistry::proposals() const {
  std::lock_guard lock(mu_);
  std::vector<Proposal> out;
  for (const auto& [_, p] : proposals_) out.push_back(p);
  return out;
}

std::vector<Proposal> GovernanceRegistry::proposals_in(const std::string& space_id) const {
  std::lock_guard lock(mu_);
  std::vector<Proposal> out;
  for (const auto& [_, p] : proposals_) {
    if (p.space_id == space_id) out.push_back(p);
  }
  return out;
}

}  // namespace govlab::spaces
