#include "govlab/gateway/server.hpp"

#include "govlab/core/crypto.hpp"
#include "govlab/core/error.hpp"
#include "govlab/gateway/frames.hpp"

#include <httplib.h>

#include <thread>

namespace govlab::gateway {

namespace {

constexpr const char* kJson = "application/json";
constexpr const char* kFrames = "application/x-govlab-frames";

void send_json(httplib::Response& res, const Json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
  send_json(res, Json{{"error", code}, {"message", message}}, status);
}

Json body_json(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json j = parse_json(req.body);
  if (!j.is_object()) throw Error(ErrorKind::kInvalidArgument, "BAD_JSON", "request body must be an object");
  return j;
}

std::uint64_t query_u64(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const auto v = req.get_param_value(key);
  try {
    std::size_t used = 0;
    const auto n = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_QUERY", std::string(key) + " must be a non-negative integer");
  }
}

Json session_view(const deliberation::Session& s) { return s.to_json(); }

Json message_json(const deliberation::RoomMessage& m) {
  return Json{{"seq", m.seq}, {"author", m.author}, {"text", m.text}, {"at", m.at}};
}

}  // namespace

std::string register_message(const std::string& public_key_hex, TimestampMs issued_at) {
  return canonical_string(Json{{"action", "register"}, {"issued_at", issued_at}, {"public_key", public_key_hex}});
}

struct ApiServer::Impl {
  Platform& platform;
  ServerOptions options;
  httplib::Server http;
  std::thread worker;

  std::mutex auth_mu;
  std::map<std::string, AuthContext> by_token;
  std::map<Address, std::string> token_of;
  std::mutex after_mu;

  Impl(Platform& p, ServerOptions o) : platform(p), options(std::move(o)) {}

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
  using AuthedHandler = std::function<void(const AuthContext&, const httplib::Request&, httplib::Response&)>;

  // Maps module errors to statuses once, for every route.
  Handler wrap(Handler h, bool mutating) {
    return [this, h = std::move(h), mutating](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
        if (mutating && res.status < 400 && options.after_command) {
          std::lock_guard lock(after_mu);
          options.after_command();
        }
      } catch (const Error& e) {
        send_error(res, http_status(e.kind()), e.code(), e.what());
      } catch (const Json::exception& e) {
        send_error(res, 422, "BAD_REQUEST", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "INTERNAL", e.what());
      }
    };
  }

  Handler authed(AuthedHandler h, bool mutating) {
    return wrap(
        [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) { h(authenticate(req), req, res); },
        mutating);
  }

  AuthContext authenticate(const httplib::Request& req) {
    const auto header = req.get_header_value("Authorization");
    const std::string prefix = "Bearer ";
    if (header.rfind(prefix, 0) != 0) {
      throw Error(ErrorKind::kUnauthenticated, "NO_TOKEN", "missing bearer token");
    }
    const auto token = header.substr(prefix.size());
    std::lock_guard lock(auth_mu);
    auto it = by_token.find(token);
    if (it == by_token.end()) throw Error(ErrorKind::kUnauthenticated, "BAD_TOKEN", "unknown or revoked token");
    if (it->second.expires_at <= platform.now()) {
      token_of.erase(it->second.address);
      by_token.erase(it);
      throw Error(ErrorKind::kUnauthenticated, "TOKEN_EXPIRED", "session token expired");
    }
    return it->second;
  }

  AuthContext issue_token(const Address& address) {
    std::lock_guard lock(auth_mu);
    if (auto it = token_of.find(address); it != token_of.end()) by_token.erase(it->second);
    AuthContext ctx{address, to_hex(random_bytes(32)), platform.now() + options.token_ttl};
    by_token[ctx.token] = ctx;
    token_of[address] = ctx.token;
    return ctx;
  }

  void require_self_or_operator(const AuthContext& ctx, const Address& target) {
    if (ctx.address != target && !(platform.is_operator(ctx.address) && !platform.options().operators.empty())) {
      throw Error(ErrorKind::kForbidden, "NOT_OWNER", ctx.address + " may not act for " + target);
    }
  }

  void require_room_access(const AuthContext& ctx, const deliberation::Room& room) {
    if (!room.is_member(ctx.address) &&
        !(platform.is_operator(ctx.address) && !platform.options().operators.empty())) {
      throw Error(ErrorKind::kForbidden, "NOT_MEMBER", ctx.address + " is not in room " + room.id());
    }
  }

  void routes() {
    http.Get("/v1/health", wrap([](const httplib::Request&, httplib::Response& res) { send_json(res, Json{{"ok", true}}); }, false));

    http.Post("/v1/register", wrap([this](const httplib::Request& req, httplib::Response& res) { do_register(req, res); }, true));

    http.Get("/v1/me", authed(
                           [this](const AuthContext& ctx, const httplib::Request&, httplib::Response& res) {
                             send_json(res, Json{{"address", ctx.address},
                                                 {"expires_at", ctx.expires_at},
                                                 {"operator", platform.is_operator(ctx.address)}});
                           },
                           false));

    // ---- spaces
    http.Get("/v1/spaces", wrap(
                               [this](const httplib::Request&, httplib::Response& res) {
                                 Json out = Json::array();
                                 for (const auto& s : platform.spaces()) out.push_back(space_config_to_json(s.config));
                                 send_json(res, out);
                               },
                               false));
    http.Get(R"(/v1/spaces/([^/]+))", wrap(
                                          [this](const httplib::Request& req, httplib::Response& res) {
                                            send_json(res, space_config_to_json(platform.space(req.matches[1]).config));
                                          },
                                          false));
    http.Post("/v1/spaces", authed(
                                [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                                  auto space = platform.create_space(space_config_from_json(body_json(req)), ctx.address);
                                  send_json(res, space_config_to_json(space.config), 201);
                                },
                                true));
    http.Post("/v1/assign", authed(
                                [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                                  const auto body = body_json(req);
                                  auto plan = platform.assign_conditions(body.value("seed", std::uint64_t{0}), ctx.address);
                                  Json map = Json::object();
                                  for (const auto& [a, c] : plan.assignment) map[a] = c.code();
                                  send_json(res, Json{{"seed", plan.seed}, {"assignment", map}, {"counts", plan.counts}});
                                },
                                true));
    http.Post(R"(/v1/spaces/([^/]+)/mint)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const auto body = body_json(req);
                    auto grants = platform.mint(req.matches[1], ctx.address,
                                                body.value("participants", std::vector<Address>{}));
                    send_json(res, grants_json(grants), 201);
                  },
                  true));
    http.Get(R"(/v1/spaces/([^/]+)/grants)",
             authed([this](const AuthContext&, const httplib::Request& req,
                           httplib::Response& res) { send_json(res, grants_json(platform.grants(req.matches[1]))); },
                    false));
    http.Post(R"(/v1/spaces/([^/]+)/proposals)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const auto body = body_json(req);
                    auto p = platform.open_proposal(req.matches[1], body.at("options").get<std::vector<std::string>>(),
                                                    ctx.address);
                    send_json(res, proposal_to_json(p), 201);
                  },
                  true));

    // ---- proposals
    http.Get("/v1/proposals", wrap(
                                  [this](const httplib::Request&, httplib::Response& res) {
                                    Json out = Json::array();
                                    for (const auto& p : platform.proposals()) out.push_back(proposal_to_json(p));
                                    send_json(res, out);
                                  },
                                  false));
    http.Get(R"(/v1/proposals/([^/]+))", wrap(
                                             [this](const httplib::Request& req, httplib::Response& res) {
                                               send_json(res, proposal_to_json(platform.proposal(req.matches[1])));
                                             },
                                             false));
    http.Post(R"(/v1/proposals/([^/]+)/votes)",
              authed([this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) { do_vote(ctx, req, res); }, true));
    http.Post(R"(/v1/proposals/([^/]+)/close)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const auto body = body_json(req);
                    auto p = platform.close_proposal(req.matches[1], ctx.address, body.value("force", false));
                    send_json(res, proposal_to_json(p));
                  },
                  true));
    http.Post(R"(/v1/proposals/([^/]+)/publish)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    send_json(res, platform.publish(req.matches[1], ctx.address).to_json());
                  },
                  true));
    http.Get(R"(/v1/proposals/([^/]+)/result)",
             wrap(
                 [this](const httplib::Request& req, httplib::Response& res) {
                   const std::string pid = req.matches[1];
                   platform.proposal(pid);  // 404 for unknown ids
                   auto result = platform.result(pid);
                   if (!result) {
                     send_error(res, 404, "NOT_PUBLISHED", "result of " + pid + " is not published");
                     return;
                   }
                   send_json(res, result->to_json());
                 },
                 false));
    http.Get(R"(/v1/proposals/([^/]+)/ballots)",
             wrap(
                 [this](const httplib::Request& req, httplib::Response& res) {
                   Json out = Json::array();
                   for (const auto& b : platform.ballots(req.matches[1])) out.push_back(b.to_json());
                   send_json(res, out);
                 },
                 false));

    // ---- chain
    http.Get("/v1/chain", wrap(
                              [this](const httplib::Request& req, httplib::Response& res) {
                                std::string body;
                                for (const auto& line : platform.chain_view(query_u64(req, "from", 0))) {
                                  body += line;
                                  body += '\n';
                                }
                                res.set_content(body, "application/x-ndjson");
                              },
                              false));

    // ---- sessions
    http.Post("/v1/sessions", authed(
                                  [this](const AuthContext& ctx, const httplib::Request&, httplib::Response& res) {
                                    send_json(res, session_view(platform.start_session(ctx.address)), 201);
                                  },
                                  true));
    http.Get(R"(/v1/sessions/([^/]+))", authed(
                                            [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                                              const std::string who = req.matches[1];
                                              require_self_or_operator(ctx, who);
                                              send_json(res, session_view(platform.session(who)));
                                            },
                                            false));
    http.Post(R"(/v1/sessions/([^/]+)/advance)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const std::string who = req.matches[1];
                    require_self_or_operator(ctx, who);
                    const auto event = deliberation::parse_session_event(body_json(req).at("event").get<std::string>());
                    send_json(res, session_view(platform.advance_session(who, event)));
                  },
                  true));
    http.Post(R"(/v1/sessions/([^/]+)/value-answer)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const std::string who = req.matches[1];
                    require_self_or_operator(ctx, who);
                    const auto answer = deliberation::parse_value_answer(body_json(req).at("answer").get<std::string>());
                    send_json(res, session_view(platform.answer_value_prompt(who, answer)));
                  },
                  true));
    http.Post(R"(/v1/sessions/([^/]+)/ai-turn)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const std::string who = req.matches[1];
                    require_self_or_operator(ctx, who);
                    auto ex = platform.ai_turn(who, body_json(req).at("text").get<std::string>());
                    send_json(res, Json{{"reply", ex.reply},
                                        {"fallback_used", ex.fallback_used},
                                        {"session", session_view(platform.session(who))}});
                  },
                  true));
    http.Post(R"(/v1/sessions/([^/]+)/survey)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    const std::string who = req.matches[1];
                    require_self_or_operator(ctx, who);
                    auto body = body_json(req);
                    body["participant"] = who;
                    auto s = platform.submit_survey(who, experiment::SurveyResponse::from_json(body));
                    send_json(res, session_view(s));
                  },
                  true));

    // ---- rooms
    http.Get(R"(/v1/rooms/([^/]+)/messages)", authed(
                                                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                                                    auto room = platform.room(req.matches[1]);
                                                    require_room_access(ctx, *room);
                                                    Json out = Json::array();
                                                    for (const auto& m : room->messages(query_u64(req, "after", 0))) {
                                                      out.push_back(message_json(m));
                                                    }
                                                    send_json(res, out);
                                                  },
                                                  false));
    http.Post(R"(/v1/rooms/([^/]+)/messages)",
              authed(
                  [this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
                    auto m = platform.post_room_message(req.matches[1], ctx.address,
                                                        body_json(req).at("text").get<std::string>());
                    send_json(res, message_json(m), 201);
                  },
                  true));
    http.Post(R"(/v1/rooms/([^/]+)/channel)",
              authed([this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) { do_channel_post(ctx, req, res); },
                     true));
    http.Get(R"(/v1/rooms/([^/]+)/channel)",
             authed([this](const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) { do_channel_poll(ctx, req, res); },
                    false));
  }

  static Json grants_json(const std::vector<ledger::TokenGrant>& grants) {
    Json out = Json::array();
    for (const auto& g : grants) out.push_back({{"address", g.address}, {"amount", g.amount}});
    return out;
  }

  void do_register(const httplib::Request& req, httplib::Response& res) {
    const auto body = body_json(req);
    const auto key_hex = body.at("public_key").get<std::string>();
    const auto issued_at = body.at("issued_at").get<TimestampMs>();
    const auto key = from_hex(key_hex);
    const auto sig = from_hex(body.at("signature").get<std::string>());
    if (key.size() != identity::kPublicKeySize) {
      throw Error(ErrorKind::kInvalidArgument, "BAD_KEY", "public key must be 32 bytes");
    }
    const auto now = platform.now();
    if (issued_at < now - kRegisterWindow || issued_at > now + kRegisterWindow) {
      throw Error(ErrorKind::kUnauthenticated, "STALE_REGISTRATION", "issued_at is outside the accepted window");
    }
    if (!identity::verify(to_bytes(register_message(to_hex(key), issued_at)), sig, key)) {
      throw Error(ErrorKind::kUnauthenticated, "BAD_SIGNATURE", "registration signature does not verify");
    }
    const auto address = platform.register_participant(key);
    const auto ctx = issue_token(address);
    send_json(res, Json{{"address", ctx.address}, {"token", ctx.token}, {"expires_at", ctx.expires_at}}, 201);
  }

  void do_vote(const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
    const auto body = body_json(req);
    tally::SignedBallot sb{tally::Ballot::from_json(body.at("ballot")),
                           from_hex(body.at("signature").get<std::string>())};
    if (sb.ballot.proposal_id != std::string(req.matches[1])) {
      throw Error(ErrorKind::kInvalidArgument, "WRONG_PROPOSAL", "ballot is for " + sb.ballot.proposal_id);
    }
    if (sb.ballot.voter != ctx.address) {
      throw Error(ErrorKind::kForbidden, "NOT_VOTER", "ballot voter differs from the authenticated address");
    }
    const auto receipt = platform.cast_ballot(sb);
    // Deliberately no counts or scores here.
    send_json(res, Json{{"accepted", true},
                        {"seq", receipt.seq},
                        {"event_hash", to_hex(receipt.event_hash)},
                        {"effective", receipt.effective}},
              201);
  }

  void do_channel_post(const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
    const std::string room_id = req.matches[1];
    auto room = platform.room(room_id);
    require_room_access(ctx, *room);
    std::string out;
    for (const auto& frame : decode_frames(req.body)) {
      const auto type = frame.value("type", std::string{});
      if (type == "post") {
        auto m = platform.post_room_message(room_id, ctx.address, frame.at("text").get<std::string>());
        out += encode_frame(Json{{"type", "ack"}, {"seq", m.seq}});
      } else if (type == "ping") {
        out += encode_frame(Json{{"type", "pong"}, {"at", platform.now()}});
      } else {
        out += encode_frame(Json{{"type", "error"}, {"error", "BAD_FRAME"}, {"message", "unknown frame type " + type}});
      }
    }
    res.set_content(out, kFrames);
  }

  void do_channel_poll(const AuthContext& ctx, const httplib::Request& req, httplib::Response& res) {
    auto room = platform.room(req.matches[1]);
    require_room_access(ctx, *room);
    const auto after = query_u64(req, "after", 0);
    const auto wait = std::min<std::int64_t>(static_cast<std::int64_t>(query_u64(req, "wait_ms", 0)), kMaxChannelWaitMs);
    std::string out;
    for (const auto& m : room->wait_messages(after, std::chrono::milliseconds(wait))) {
      auto j = message_json(m);
      j["type"] = "message";
      out += encode_frame(j);
    }
    res.set_content(out, kFrames);
  }
};

ApiServer::ApiServer(Platform& platform, ServerOptions options)
    : impl_(std::make_unique<Impl>(platform, std::move(options))) {
  impl_->routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->http.bind_to_any_port(host);
  } else if (!impl_->http.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error(ErrorKind::kIo, "BIND_FAILED", "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void ApiServer::serve() { impl_->http.listen_after_bind(); }

int ApiServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  impl_->worker = std::thread([this] { serve(); });
  impl_->http.wait_until_ready();
  return bound;
}

void ApiServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace govlab::gateway
