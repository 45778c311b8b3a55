#pragma once

// Localhost HTTP helpers around a running ApiServer.

#include "govlab/core/bytes.hpp"
#include "govlab/core/canonical.hpp"
#include "govlab/gateway/server.hpp"
#include "govlab/identity/identity.hpp"

#include <httplib.h>

#include <string>
#include <vector>

namespace testutil {

struct Reply {
  int status = 0;
  std::string body;
  govlab::Json json() const { return govlab::Json::parse(body); }
  std::string error() const {
    auto j = govlab::Json::parse(body, nullptr, false);
    return j.is_object() ? j.value("error", std::string{}) : std::string{};
  }
};

class Http {
 public:
  explicit Http(int port) : client_("127.0.0.1", port) { client_.set_read_timeout(40, 0); }

  Reply get(const std::string& path, const std::string& token = {}) {
    auto r = client_.Get(path, headers(token));
    return r ? Reply{r->status, r->body} : Reply{};
  }
  Reply post(const std::string& path, const govlab::Json& body, const std::string& token = {}) {
    return post_raw(path, body.dump(), "application/json", token);
  }
  Reply post_raw(const std::string& path, const std::string& body, const std::string& type,
                 const std::string& token = {}) {
    auto r = client_.Post(path, headers(token), body, type);
    return r ? Reply{r->status, r->body} : Reply{};
  }

  static govlab::Json register_body(const govlab::identity::Identity& id, govlab::TimestampMs issued_at) {
    const auto msg = govlab::gateway::register_message(id.public_key_hex(), issued_at);
    return {{"public_key", id.public_key_hex()},
            {"issued_at", issued_at},
            {"signature", govlab::to_hex(id.sign(msg).signature)}};
  }

  // Registers and returns the bearer token.
  std::string login(const govlab::identity::Identity& id, govlab::TimestampMs now) {
    auto r = post("/v1/register", register_body(id, now));
    if (r.status != 201) throw std::runtime_error("register failed: " + r.body);
    return r.json().at("token").get<std::string>();
  }

 private:
  static httplib::Headers headers(const std::string& token) {
    if (token.empty()) return {};
    return {{"Authorization", "Bearer " + token}};
  }
  httplib::Client client_;
};

// Keys that would reveal aggregates or individual allocations.
inline const std::vector<std::string>& leak_markers() {
  static const std::vector<std::string> m = {"\"scores\"", "\"turnout\"", "\"total_effective\"", "\"winner\"",
                                             "\"succeeded\"", "\"allocation\"", "\"ballots\"", "\"effective_votes\""};
  return m;
}

struct LeakReport {
  std::vector<std::string> findings;  // "<path>: <marker>" or "<path>: status N"
  std::size_t endpoints = 0;
};

// GETs every readable endpoint as `token` and looks for leak markers. The
// ballots and result routes must refuse outright.
inline LeakReport scan_for_interim_leaks(Http& http, const std::string& token, const std::string& space_id,
                                         const std::string& proposal_id, const std::string& self,
                                         const std::string& room_id) {
  LeakReport rep;
  std::vector<std::string> paths = {"/v1/health",
                                    "/v1/me",
                                    "/v1/spaces",
                                    "/v1/spaces/" + space_id,
                                    "/v1/spaces/" + space_id + "/grants",
                                    "/v1/proposals",
                                    "/v1/proposals/" + proposal_id,
                                    "/v1/chain",
                                    "/v1/chain?from=0",
                                    "/v1/sessions/" + self};
  if (!room_id.empty()) {
    paths.push_back("/v1/rooms/" + room_id + "/messages");
    paths.push_back("/v1/rooms/" + room_id + "/channel?after=0&wait_ms=0");
  }
  for (const auto& p : paths) {
    auto r = http.get(p, token);
    ++rep.endpoints;
    if (r.status != 200) rep.findings.push_back(p + ": status " + std::to_string(r.status));
    for (const auto& m : leak_markers()) {
      if (r.body.find(m) != std::string::npos) rep.findings.push_back(p + ": " + m);
    }
  }
  for (const auto& [p, want] : {std::pair{"/v1/proposals/" + proposal_id + "/result", 404},
                                std::pair{"/v1/proposals/" + proposal_id + "/ballots", 409}}) {
    auto r = http.get(p, token);
    ++rep.endpoints;
    if (r.status != want) rep.findings.push_back(p + ": status " + std::to_string(r.status));
    for (const auto& m : leak_markers()) {
      if (r.body.find(m) != std::string::npos) rep.findings.push_back(p + ": " + m);
    }
  }
  return rep;
}

}  // namespace testutil
