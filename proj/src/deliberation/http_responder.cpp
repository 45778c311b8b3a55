#include "govlab/deliberation/http_responder.hpp"

#include "govlab/core/error.hpp"

#include <httplib.h>

namespace govlab::deliberation {

HttpAiResponder::HttpAiResponder(const std::string& url, std::chrono::milliseconds timeout) : timeout_(timeout) {
  const auto scheme_end = url.find("://");
  if (url.rfind("http://", 0) != 0 || scheme_end == std::string::npos) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_URL", "AI endpoint must be http://host[:port]/path, got " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

std::string HttpAiResponder::respond(const AiRequest& request) {
  httplib::Client client(origin_);
  const auto secs = timeout_.count() / 1000;
  const auto usecs = (timeout_.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  auto res = client.Post(path_, request.to_json().dump(), "application/json");
  if (!res) throw Error(ErrorKind::kIo, "AI_UNREACHABLE", httplib::to_string(res.error()));
  if (res->status != 200) throw Error(ErrorKind::kIo, "AI_STATUS", "AI endpoint returned " + std::to_string(res->status));
  return parse_json(res->body).at("reply").get<std::string>();
}

std::shared_ptr<AiResponder> make_responder(const std::string& endpoint, std::chrono::milliseconds timeout) {
  if (endpoint.empty()) return std::make_shared<EchoResponder>();
  return std::make_shared<HttpAiResponder>(endpoint, timeout);
}

}  // namespace govlab::deliberation
