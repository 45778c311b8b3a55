#pragma once

#include "govlab/deliberation/responder.hpp"

#include <chrono>
#include <memory>
#include <string>

namespace govlab::deliberation {

/// POSTs AiRequest::to_json() to an HTTP endpoint and reads {"reply": str}.
/// Failures throw; respond_with_timeout turns them into the fallback reply.
class HttpAiResponder final : public AiResponder {
 public:
  /// `url` like "http://127.0.0.1:9100/reply". Throws InvalidArgument "BAD_URL".
  HttpAiResponder(const std::string& url, std::chrono::milliseconds timeout);
  std::string respond(const AiRequest& request) override;

 private:
  std::string origin_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

/// HttpAiResponder for a non-empty endpoint, EchoResponder otherwise.
std::shared_ptr<AiResponder> make_responder(const std::string& endpoint, std::chrono::milliseconds timeout);

}  // namespace govlab::deliberation
