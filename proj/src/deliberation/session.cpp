#include "govlab/deliberation/session.hpp"

#include "govlab/core/error.hpp"

#include <array>

namespace govlab::deliberation {

namespace {
constexpr std::array<std::string_view, 8> kStateNames = {"REGISTERED", "INTRO",  "VALUE_PROMPT", "AI_CHAT",
                                                        "GROUP_ROOM", "SURVEY", "VOTING",       "DONE"};
constexpr std::array<std::string_view, 7> kEventNames = {"start",       "intro_done",      "leave_chat", "leave_room",
                                                        "survey_done", "ballot_accepted", "abort"};

[[noreturn]] void illegal(const Session& s, std::string_view attempted, const std::string& detail = {}) {
  std::string msg = "cannot apply '" + std::string(attempted) + "' in state " + std::string(to_string(s.state));
  if (!detail.empty()) msg += ": " + detail;
  throw Error(ErrorKind::kConflict, "ILLEGAL_TRANSITION", msg);
}

void enter(Session& s, SessionState next, TimestampMs now) {
  s.state = next;
  s.entered_at[next] = now;
}
}  // namespace

std::string_view to_string(SessionState s) { return kStateNames[static_cast<std::size_t>(s)]; }

SessionState parse_session_state(std::string_view s) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == s) return static_cast<SessionState>(i);
  }
  throw Error(ErrorKind::kInvalidArgument, "BAD_STATE", "unknown session state '" + std::string(s) + "'");
}

std::string_view to_string(SessionEvent e) { return kEventNames[static_cast<std::size_t>(e)]; }

SessionEvent parse_session_event(std::string_view s) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s) return static_cast<SessionEvent>(i);
  }
  throw Error(ErrorKind::kInvalidArgument, "BAD_EVENT", "unknown session event '" + std::string(s) + "'");
}

std::size_t Session::user_turns() const {
  std::size_t n = 0;
  for (const auto& m : ai_transcript) n += m.role == "user";
  return n;
}

Json Session::to_json() const {
  Json transcript = Json::array();
  for (const auto& m : ai_transcript) transcript.push_back({{"role", m.role}, {"text", m.text}, {"at", m.at}});
  Json entered = Json::object();
  for (const auto& [state, at] : entered_at) entered[std::string(to_string(state))] = at;
  Json j{{"participant", participant},
         {"state", to_string(state)},
         {"ai_transcript", transcript},
         {"entered_at", entered},
         {"room_id", room_id},
         {"aborted", aborted},
         {"user_turns", user_turns()}};
  j["value_answer"] = value_answer ? Json(to_string(*value_answer)) : Json(nullptr);
  return j;
}

Session start_session(const Address& participant, TimestampMs now) {
  Session s;
  s.participant = participant;
  s.entered_at[SessionState::kRegistered] = now;
  return s;
}

Session advance(Session s, SessionEvent event, TimestampMs now, const Gates& gates) {
  if (event == SessionEvent::kAbort) {
    if (s.state == SessionState::kDone) illegal(s, to_string(event), "session already finished");
    s.aborted = true;
    enter(s, SessionState::kDone, now);
    return s;
  }

  switch (s.state) {
    case SessionState::kRegistered:
      if (event == SessionEvent::kStart) {
        enter(s, SessionState::kIntro, now);
        return s;
      }
      if (event == SessionEvent::kIntroDone) {
        enter(s, SessionState::kIntro, now);
        enter(s, SessionState::kValuePrompt, now);
        return s;
      }
      break;
    case SessionState::kIntro:
      if (event == SessionEvent::kIntroDone) {
        enter(s, SessionState::kValuePrompt, now);
        return s;
      }
      break;
    case SessionState::kAiChat:
      if (event == SessionEvent::kLeaveChat) {
        if (s.user_turns() < gates.min_ai_turns) {
          illegal(s, to_string(event),
                  std::to_string(s.user_turns()) + " of " + std::to_string(gates.min_ai_turns) + " AI turns completed");
        }
        enter(s, SessionState::kGroupRoom, now);
        return s;
      }
      break;
    case SessionState::kGroupRoom:
      if (event == SessionEvent::kLeaveRoom) {
        const TimestampMs dwell = now - s.entered_at.at(SessionState::kGroupRoom);
        if (dwell < gates.min_room_dwell) {
          illegal(s, to_string(event),
                  "room dwell " + std::to_string(dwell) + " ms is below " + std::to_string(gates.min_room_dwell));
        }
        enter(s, SessionState::kSurvey, now);
        return s;
      }
      break;
    case SessionState::kSurvey:
      if (event == SessionEvent::kSurveyDone) {
        enter(s, SessionState::kVoting, now);
        return s;
      }
      break;
    case SessionState::kVoting:
      if (event == SessionEvent::kBallotAccepted) {
        enter(s, SessionState::kDone, now);
        return s;
      }
      break;
    case SessionState::kValuePrompt:  // left only through answer_value_prompt
    case SessionState::kDone:
      break;
  }
  illegal(s, to_string(event));
}

Session answer_value_prompt(Session s, ValueAnswer answer, const SeedCase& seed_case, TimestampMs now) {
  if (s.value_answer) {
    throw Error(ErrorKind::kConflict, "ALREADY_ANSWERED", "value prompt already answered for " + s.participant);
  }
  if (s.state != SessionState::kValuePrompt) illegal(s, "answer");
  s.value_answer = answer;
  s.ai_transcript.push_back({"assistant", seed_case.branch_seed(answer), now});
  enter(s, SessionState::kAiChat, now);
  return s;
}

AiExchange run_ai_exchange(const Session& s, const std::string& user_text, std::shared_ptr<AiResponder> responder,
                           std::chrono::milliseconds timeout, const SeedCase& seed_case) {
  if (s.state != SessionState::kAiChat) illegal(s, "ai_turn");
  if (user_text.empty()) throw Error(ErrorKind::kInvalidArgument, "EMPTY_TEXT", "user text is empty");

  AiRequest req{s.ai_transcript, user_text, seed_case.interpretation_text, seed_case.value_question,
                seed_case.suggested_topics};
  const auto start = std::chrono::steady_clock::now();
  auto reply = responder ? respond_with_timeout(std::move(responder), std::move(req), timeout) : std::nullopt;

  AiExchange ex;
  ex.prompt = user_text;
  ex.latency = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  ex.fallback_used = !reply;
  ex.reply = reply ? *reply : std::string(kFallbackReply);
  return ex;
}

Session record_ai_exchange(Session s, const AiExchange& exchange, TimestampMs now) {
  if (s.state != SessionState::kAiChat) illegal(s, "ai_turn");
  s.ai_transcript.push_back({"user", exchange.prompt, now});
  s.ai_transcript.push_back({"assistant", exchange.reply, now});
  return s;
}

std::pair<Session, AiExchange> ai_turn(Session s, const std::string& user_text, std::shared_ptr<AiResponder> responder,
                                       std::chrono::milliseconds timeout, const SeedCase& seed_case, TimestampMs now) {
  auto ex = run_ai_exchange(s, user_text, std::move(responder), timeout, seed_case);
  s = record_ai_exchange(std::move(s), ex, now);
  return {std::move(s), std::move(ex)};
}

}  // namespace govlab::deliberation
