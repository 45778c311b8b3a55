#pragma once

// Event-sourced platform state. Every mutation is a chain event; the derived
// state (registry, ledger, proposals, ballots, sessions, rooms, surveys) is a
// fold over the log, so a restart replays events.jsonl into an identical state.
//
// Commands validate by applying the prepared event to the in-memory state
// first and only then commit it to the chain; apply functions check
// everything before mutating anything.

#include "govlab/chain/audit_chain.hpp"
#include "govlab/core/clock.hpp"
#include "govlab/deliberation/responder.hpp"
#include "govlab/deliberation/room.hpp"
#include "govlab/deliberation/seed_case.hpp"
#include "govlab/deliberation/session.hpp"
#include "govlab/experiment/assignment.hpp"
#include "govlab/experiment/summary.hpp"
#include "govlab/experiment/survey.hpp"
#include "govlab/ledger/token_ledger.hpp"
#include "govlab/spaces/governance.hpp"
#include "govlab/tally/tally.hpp"

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace govlab::gateway {

using identity::Address;

struct PlatformOptions {
  deliberation::Gates gates;
  std::size_t room_capacity = deliberation::kDefaultRoomCapacity;
  deliberation::SeedCase seed_case;
  std::shared_ptr<deliberation::AiResponder> responder;
  std::chrono::milliseconds ai_timeout = deliberation::kDefaultAiTimeout;
  ledger::Amount tokens_per_head = ledger::kTokensPerHead;
  /// Ballots are only accepted from sessions in VOTING (or DONE, for replacements).
  bool require_deliberation = true;
  /// Operators may create spaces and run assignment. Empty: anyone may.
  std::set<Address> operators;
};

struct BallotReceipt {
  std::uint64_t seq = 0;
  Digest event_hash{};
  bool effective = true;  // false when an already-stored ballot has a later cast_at
};

Json space_config_to_json(const spaces::SpaceConfig& c);
/// Throws InvalidArgument "BAD_SPACE_CONFIG".
spaces::SpaceConfig space_config_from_json(const Json& j);
/// Public view: no balances, no ballot-derived numbers.
Json proposal_to_json(const spaces::Proposal& p);

class Platform {
 public:
  using EventSink = std::function<void(const chain::ChainEvent&)>;

  Platform(PlatformOptions options, Clock clock);

  /// Rebuilds state from a verified log. `after_apply` sees each event once applied.
  static std::unique_ptr<Platform> replay(PlatformOptions options, Clock clock, std::vector<chain::ChainEvent> events,
                                          const std::function<void(const Platform&, const chain::ChainEvent&)>&
                                              after_apply = {});

  /// Receives every newly committed event (persistence). Runs under the write lock.
  void set_event_sink(EventSink sink);

  // ---- commands -------------------------------------------------------------

  /// Idempotent per key: an already-registered key returns its address with no new event.
  Address register_participant(std::span<const std::uint8_t> public_key);

  spaces::Space create_space(spaces::SpaceConfig config, const Address& caller);

  /// Experiment-wide block randomization over every registered non-operator participant. Once only.
  experiment::AssignmentPlan assign_conditions(std::uint64_t seed, const Address& caller);

  /// Mints a space for `participants`, or for everyone assigned to the space's condition when empty.
  /// A zero total_supply in the space policy means tokens_per_head * n.
  std::vector<ledger::TokenGrant> mint(const std::string& space_id, const Address& caller,
                                       std::vector<Address> participants = {});

  spaces::Proposal open_proposal(const std::string& space_id, std::vector<std::string> options, const Address& caller);

  /// Rejections throw Error with code = rejection name (CLOSED -> kConflict, others -> kInvalidArgument).
  BallotReceipt cast_ballot(const tally::SignedBallot& ballot);

  spaces::Proposal close_proposal(const std::string& proposal_id, const Address& caller, bool force = false);

  /// CLOSED -> PUBLISHED and records the tally.
  tally::TallyResult publish(const std::string& proposal_id, const Address& caller);

  deliberation::Session start_session(const Address& participant);
  deliberation::Session advance_session(const Address& participant, deliberation::SessionEvent event);
  deliberation::Session answer_value_prompt(const Address& participant, deliberation::ValueAnswer answer);
  /// Calls the configured responder outside the write lock; serial per participant.
  deliberation::AiExchange ai_turn(const Address& participant, const std::string& text);
  /// Stores the survey and moves SURVEY -> VOTING.
  deliberation::Session submit_survey(const Address& participant, experiment::SurveyResponse response);
  deliberation::RoomMessage post_room_message(const std::string& room_id, const Address& author,
                                              const std::string& text);

  // ---- queries ----------------------------------------------------------------

  bool is_registered(const Address& a) const;
  Bytes public_key(const Address& a) const;
  std::vector<Address> participants() const;
  bool is_operator(const Address& a) const;

  spaces::Space space(const std::string& id) const;
  std::vector<spaces::Space> spaces() const;
  spaces::Proposal proposal(const std::string& id) const;
  std::vector<spaces::Proposal> proposals() const;
  std::optional<experiment::AssignmentPlan> assignment() const;
  std::vector<ledger::TokenGrant> grants(const std::string& space_id) const;

  /// Only for PUBLISHED proposals.
  std::optional<tally::TallyResult> result(const std::string& proposal_id) const;
  /// Effective ballots of a proposal; exposed only once it is CLOSED or later.
  std::vector<tally::Ballot> ballots(const std::string& proposal_id) const;

  deliberation::Session session(const Address& participant) const;
  bool has_session(const Address& participant) const;
  std::shared_ptr<deliberation::Room> room(const std::string& id) const;
  std::vector<experiment::SurveyResponse> surveys() const;

  /// Table of ratio summaries over published proposals, one condition per space.
  experiment::ConditionSummary condition_summary() const;
  experiment::ResponsesByCondition surveys_by_condition() const;

  const chain::AuditChain& chain() const noexcept { return chain_; }
  /// JSONL lines from `from`. BALLOT_CAST payloads of proposals that are still
  /// OPEN are blanked and flagged "redacted"; hash and prev_hash are served
  /// unchanged so the event verifies once the full payload is visible.
  std::vector<std::string> chain_view(std::uint64_t from) const;

  /// Everything derived from the log, for replay equality checks and snapshots.
  Json state_json() const;

  const PlatformOptions& options() const noexcept { return options_; }
  TimestampMs now() const { return clock_(); }

 private:
  void commit(chain::EventKind kind, const Json& payload);
  void apply(const chain::ChainEvent& ev);

  void apply_registered(const Json& p);
  void apply_space_created(const Json& p, TimestampMs at);
  void apply_assignment(const Json& p);
  void apply_mint(const Json& p);
  void apply_proposal_opened(const Json& p, TimestampMs at);
  void apply_ballot(const Json& p, TimestampMs at);
  void apply_proposal_closed(const Json& p, TimestampMs at);
  void apply_result(const Json& p);
  void apply_session(const Json& p, TimestampMs at);
  void apply_ai_exchange(const Json& p, TimestampMs at);
  void apply_survey(const Json& p, TimestampMs at);
  void apply_room_message(const Json& p, TimestampMs at);

  std::string condition_of(const Address& a) const;
  deliberation::Session& session_ref(const Address& a);
  const deliberation::Session& session_ref(const Address& a) const;
  void require_operator(const Address& caller) const;

  PlatformOptions options_;
  Clock clock_;
  chain::AuditChain chain_;
  EventSink sink_;

  mutable std::recursive_mutex mu_;  // single writer; readers take it briefly
  std::map<Address, Bytes> participants_;
  spaces::GovernanceRegistry registry_;
  ledger::TokenLedger ledger_;
  std::optional<experiment::AssignmentPlan> plan_;
  std::map<std::string, std::unique_ptr<tally::BallotBox>> boxes_;
  std::map<std::string, tally::TallyResult> results_;
  std::map<Address, deliberation::Session> sessions_;
  deliberation::RoomDirectory rooms_;
  std::map<Address, experiment::SurveyResponse> surveys_;

  std::mutex ai_mu_;
  std::map<Address, std::shared_ptr<std::mutex>> ai_locks_;
};

}  // namespace govlab::gateway
