#pragma once

// HTTP API under /v1. JSON bodies; errors come back as
// {"error": CODE, "message": text} with the status of the error's kind.
//
//   POST /v1/register                      {public_key, issued_at, signature}
//   GET  /v1/me
//   GET  /v1/health
//   GET  /v1/spaces | /v1/spaces/{id}
//   POST /v1/spaces                        operator; space config
//   POST /v1/assign                        operator; {seed}
//   POST /v1/spaces/{id}/mint              admin; {participants?}
//   GET  /v1/spaces/{id}/grants
//   POST /v1/spaces/{id}/proposals         admin; {options}
//   GET  /v1/proposals | /v1/proposals/{id}
//   POST /v1/proposals/{id}/votes          {ballot, signature}
//   POST /v1/proposals/{id}/close          admin; {force?}
//   POST /v1/proposals/{id}/publish        admin
//   GET  /v1/proposals/{id}/result         404 until PUBLISHED
//   GET  /v1/proposals/{id}/ballots        409 until CLOSED
//   GET  /v1/chain?from=N                  JSONL; open-proposal ballots redacted
//   POST /v1/sessions                      start the caller's session
//   GET  /v1/sessions/{address}
//   POST /v1/sessions/{address}/advance    {event}
//   POST /v1/sessions/{address}/value-answer {answer}
//   POST /v1/sessions/{address}/ai-turn    {text}
//   POST /v1/sessions/{address}/survey     {likert, vdem}
//   GET  /v1/rooms/{id}/messages?after=N
//   POST /v1/rooms/{id}/messages           {text}
//   POST /v1/rooms/{id}/channel            client frames: {"type":"post","text"} | {"type":"ping"}
//   GET  /v1/rooms/{id}/channel?after=N&wait_ms=M   server frames, long-poll
//
// The registration signature covers the canonical JSON
// {"action":"register","issued_at":ms,"public_key":hex}; issued_at must be
// within kRegisterWindow of the server clock. Every other route except health,
// chain and the public space/proposal views takes "Authorization: Bearer <token>".

#include "govlab/gateway/platform.hpp"

#include <functional>
#include <memory>
#include <string>

namespace govlab::gateway {

inline constexpr TimestampMs kRegisterWindow = 5 * kMinute;
inline constexpr TimestampMs kDefaultTokenTtl = 24 * kHour;
inline constexpr std::int64_t kMaxChannelWaitMs = 30'000;

/// Canonical registration message for `public_key_hex` at `issued_at`.
std::string register_message(const std::string& public_key_hex, TimestampMs issued_at);

struct AuthContext {
  Address address;
  std::string token;
  TimestampMs expires_at = 0;
};

struct ServerOptions {
  TimestampMs token_ttl = kDefaultTokenTtl;
  /// Runs after each successful mutating request (snapshots).
  std::function<void()> after_command;
};

class ApiServer {
 public:
  ApiServer(Platform& platform, ServerOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port. Throws Io "BIND_FAILED".
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  /// bind + serve on a background thread.
  int start(const std::string& host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace govlab::gateway
