#pragma once

// Per-participant deliberation flow:
//
//   REGISTERED -> INTRO -> VALUE_PROMPT -> AI_CHAT -> GROUP_ROOM -> SURVEY -> VOTING -> DONE
//
// No state is skipped; an admin abort jumps straight to DONE. Transitions are
// value-to-value so the platform can replay them from the audit chain.

#include "govlab/core/clock.hpp"
#include "govlab/deliberation/responder.hpp"
#include "govlab/deliberation/seed_case.hpp"
#include "govlab/identity/identity.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace govlab::deliberation {

using identity::Address;

enum class SessionState { kRegistered, kIntro, kValuePrompt, kAiChat, kGroupRoom, kSurvey, kVoting, kDone };
enum class SessionEvent { kStart, kIntroDone, kLeaveChat, kLeaveRoom, kSurveyDone, kBallotAccepted, kAbort };

std::string_view to_string(SessionState s);
SessionState parse_session_state(std::string_view s);
std::string_view to_string(SessionEvent e);
/// "start", "intro_done", "leave_chat", "leave_room", "survey_done", "ballot_accepted", "abort".
SessionEvent parse_session_event(std::string_view s);

struct Gates {
  std::size_t min_ai_turns = 3;
  TimestampMs min_room_dwell = 5 * kMinute;
};

struct Session {
  Address participant;
  SessionState state = SessionState::kRegistered;
  std::optional<ValueAnswer> value_answer;
  std::vector<TranscriptMessage> ai_transcript;
  std::map<SessionState, TimestampMs> entered_at;
  std::string room_id;
  bool aborted = false;

  std::size_t user_turns() const;
  Json to_json() const;
  friend bool operator==(const Session&, const Session&) = default;
};

Session start_session(const Address& participant, TimestampMs now);

/// Throws Conflict "ILLEGAL_TRANSITION" naming the current state and the event,
/// including when an exit gate (turn count, room dwell) is not yet satisfied.
Session advance(Session session, SessionEvent event, TimestampMs now, const Gates& gates = {});

/// VALUE_PROMPT -> AI_CHAT, seeding the transcript with the matching branch.
/// A second answer throws Conflict "ALREADY_ANSWERED".
Session answer_value_prompt(Session session, ValueAnswer answer, const SeedCase& seed_case, TimestampMs now);

struct AiExchange {
  std::string prompt;
  std::string reply;
  std::chrono::milliseconds latency{0};
  bool fallback_used = false;
};

/// Calls the responder with the full transcript; substitutes the fallback reply on failure.
/// Does not modify the session. Throws InvalidArgument "EMPTY_TEXT" / Conflict "ILLEGAL_TRANSITION".
AiExchange run_ai_exchange(const Session& session, const std::string& user_text,
                           std::shared_ptr<AiResponder> responder, std::chrono::milliseconds timeout,
                           const SeedCase& seed_case);

/// Appends the user turn and the reply to the transcript.
Session record_ai_exchange(Session session, const AiExchange& exchange, TimestampMs now);

/// run_ai_exchange + record_ai_exchange.
std::pair<Session, AiExchange> ai_turn(Session session, const std::string& user_text,
                                       std::shared_ptr<AiResponder> responder, std::chrono::milliseconds timeout,
                                       const SeedCase& seed_case, TimestampMs now);

}  // namespace govlab::deliberation
