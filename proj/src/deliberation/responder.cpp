#include "govlab/deliberation/responder.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>

namespace govlab::deliberation {

Json AiRequest::to_json() const {
  Json msgs = Json::array();
  for (const auto& m : transcript) msgs.push_back({{"role", m.role}, {"text", m.text}, {"at", m.at}});
  return Json{{"transcript", msgs},
              {"user_text", user_text},
              {"context",
               {{"interpretation_text", interpretation_text},
                {"value_question", value_question},
                {"suggested_topics", suggested_topics}}}};
}

std::string EchoResponder::respond(const AiRequest& request) { return "You said: " + request.user_text; }

std::optional<std::string> respond_with_timeout(std::shared_ptr<AiResponder> responder, AiRequest request,
                                                std::chrono::milliseconds timeout) {
  struct Shared {
    std::mutex mu;
    std::condition_variable cv;
    bool done = false;
    std::optional<std::string> reply;
  };
  auto shared = std::make_shared<Shared>();

  std::thread([shared, responder = std::move(responder), request = std::move(request)] {
    std::optional<std::string> reply;
    try {
      reply = responder->respond(request);
    } catch (...) {
      reply.reset();
    }
    std::lock_guard lock(shared->mu);
    shared->reply = std::move(reply);
    shared->done = true;
    shared->cv.notify_all();
  }).detach();

  std::unique_lock lock(shared->mu);
  if (!shared->cv.wait_for(lock, timeout, [&] { return shared->done; })) return std::nullopt;
  if (!shared->reply || shared->reply->empty()) return std::nullopt;
  return shared->reply;
}

}  // namespace govlab::deliberation
