#pragma once

#include "govlab/core/clock.hpp"
#include "govlab/deliberation/seed_case.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace govlab::deliberation {

struct TranscriptMessage {
  std::string role;  // "assistant" or "user"
  std::string text;
  TimestampMs at = 0;
  friend bool operator==(const TranscriptMessage&, const TranscriptMessage&) = default;
};

/// What an AI responder sees: the whole transcript so far plus the case context.
struct AiRequest {
  std::vector<TranscriptMessage> transcript;
  std::string user_text;
  std::string interpretation_text;
  std::string value_question;
  std::vector<std::string> suggested_topics;

  Json to_json() const;
};

class AiResponder {
 public:
  virtual ~AiResponder() = default;
  /// May block, throw, or return empty; callers go through respond_with_timeout.
  virtual std::string respond(const AiRequest& request) = 0;
};

/// Replies "You said: <user_text>". Used when no endpoint is configured.
class EchoResponder final : public AiResponder {
 public:
  std::string respond(const AiRequest& request) override;
};

inline constexpr std::chrono::milliseconds kDefaultAiTimeout{15'000};

inline constexpr std::string_view kFallbackReply =
    "I could not generate a reply just now. Could you say more about what matters to you here?";

/// Runs the responder on a detached worker; returns nullopt on timeout, exception or empty reply.
/// A timed-out worker keeps its own reference to the responder and finishes in the background.
std::optional<std::string> respond_with_timeout(std::shared_ptr<AiResponder> responder, AiRequest request,
                                                std::chrono::milliseconds timeout);

}  // namespace govlab::deliberation
