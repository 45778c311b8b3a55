#include "govlab/gateway/platform.hpp"

#include "govlab/core/error.hpp"

#include <algorithm>
#include <cstdio>

namespace govlab::gateway {

using chain::EventKind;
using deliberation::Session;
using deliberation::SessionEvent;
using deliberation::SessionState;

// ---- JSON mapping -------------------------------------------------------------

Json space_config_to_json(const spaces::SpaceConfig& c) {
  return Json{{"id", c.id},
              {"method", spaces::to_string(c.method)},
              {"power",
               {{"kind", ledger::to_string(c.power.kind)},
                {"total_supply", c.power.total_supply},
                {"top_fraction", c.power.top_fraction.str()},
                {"top_share", c.power.top_share.str()},
                {"rng_seed", c.power.rng_seed}}},
              {"vote_duration", c.vote_duration},
              {"success_threshold", c.success_threshold.str()},
              {"admins", c.admins},
              {"moderators", c.moderators},
              {"condition", c.condition}};
}

spaces::SpaceConfig space_config_from_json(const Json& j) {
  try {
    spaces::SpaceConfig c;
    c.id = j.at("id").get<std::string>();
    c.method = spaces::parse_voting_method(j.value("method", std::string("quadratic")));
    if (j.contains("power")) {
      const auto& p = j.at("power");
      c.power.kind = ledger::parse_power_kind(p.value("kind", std::string("equal")));
      c.power.total_supply = p.value("total_supply", ledger::Amount{0});
      c.power.top_fraction = parse_ratio(p.value("top_fraction", std::string("1/5")));
      c.power.top_share = parse_ratio(p.value("top_share", std::string("4/5")));
      c.power.rng_seed = p.value("rng_seed", std::uint64_t{0});
    }
    c.vote_duration = j.value("vote_duration", spaces::kDefaultVoteDuration);
    c.success_threshold = parse_ratio(j.value("success_threshold", std::string("1/4")));
    c.admins = j.value("admins", std::set<Address>{});
    c.moderators = j.value("moderators", std::set<Address>{});
    c.condition = j.value("condition", std::string{});
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_SPACE_CONFIG", e.what());
  }
}

Json proposal_to_json(const spaces::Proposal& p) {
  Json j{{"id", p.id},
         {"space_id", p.space_id},
         {"options", p.options},
         {"open_at", p.open_at},
         {"close_at", p.close_at},
         {"status", spaces::to_string(p.status)},
         {"snapshot_ref", to_hex(p.snapshot_ref)},
         {"force_closed", p.force_closed}};
  j["closed_at"] = p.closed_at ? Json(*p.closed_at) : Json(nullptr);
  return j;
}

namespace {

Json grants_to_json(const std::vector<ledger::TokenGrant>& grants) {
  Json out = Json::array();
  for (const auto& g : grants) out.push_back({{"address", g.address}, {"amount", g.amount}});
  return out;
}

std::string format_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

constexpr TimestampMs kMaxClockSkew = kMinute;

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorKind::kCorrupt, "REPLAY_MISMATCH", what); }

}  // namespace

// ---- lifecycle -----------------------------------------------------------------

Platform::Platform(PlatformOptions options, Clock clock)
    : options_(std::move(options)),
      clock_(clock ? std::move(clock) : Clock(system_now)),
      rooms_(options_.room_capacity, options_.seed_case.suggested_topics) {
  if (!options_.responder) options_.responder = std::make_shared<deliberation::EchoResponder>();
}

std::unique_ptr<Platform> Platform::replay(
    PlatformOptions options, Clock clock, std::vector<chain::ChainEvent> events,
    const std::function<void(const Platform&, const chain::ChainEvent&)>& after_apply) {
  auto verdict = chain::verify_chain(events);
  if (!verdict.valid) throw chain::BrokenChain(*verdict.broken_at, verdict.reason);

  auto platform = std::make_unique<Platform>(std::move(options), std::move(clock));
  for (const auto& ev : events) {
    try {
      platform->apply(ev);
    } catch (const Error& e) {
      throw Error(ErrorKind::kCorrupt, "REPLAY_FAILED",
                  "event seq " + std::to_string(ev.seq) + " does not apply: " + e.what());
    }
    platform->chain_.commit(ev);
    if (after_apply) after_apply(*platform, ev);
  }
  return platform;
}

void Platform::set_event_sink(EventSink sink) {
  std::lock_guard lock(mu_);
  sink_ = std::move(sink);
}

void Platform::commit(EventKind kind, const Json& payload) {
  // Caller holds mu_.
  auto ev = chain_.prepare(kind, canonical_string(payload), clock_());
  apply(ev);
  if (sink_) sink_(ev);
  chain_.commit(ev);
}

void Platform::apply(const chain::ChainEvent& ev) {
  const Json p = parse_json(ev.payload);
  switch (ev.kind) {
    case EventKind::kParticipantRegistered: return apply_registered(p);
    case EventKind::kSpaceCreated: return apply_space_created(p, ev.timestamp);
    case EventKind::kAssignment: return apply_assignment(p);
    case EventKind::kMint: return apply_mint(p);
    case EventKind::kProposalOpened: return apply_proposal_opened(p, ev.timestamp);
    case EventKind::kBallotCast: return apply_ballot(p, ev.timestamp);
    case EventKind::kProposalClosed: return apply_proposal_closed(p, ev.timestamp);
    case EventKind::kResultPublished: return apply_result(p);
    case EventKind::kSessionAdvanced: return apply_session(p, ev.timestamp);
    case EventKind::kAiExchange: return apply_ai_exchange(p, ev.timestamp);
    case EventKind::kSurveySubmitted: return apply_survey(p, ev.timestamp);
    case EventKind::kRoomMessage: return apply_room_message(p, ev.timestamp);
  }
}

// ---- helpers -------------------------------------------------------------------

bool Platform::is_operator(const Address& a) const {
  return options_.operators.empty() || options_.operators.contains(a);
}

void Platform::require_operator(const Address& caller) const {
  if (!is_operator(caller)) throw Error(ErrorKind::kForbidden, "NOT_OPERATOR", caller + " is not an operator");
}

std::string Platform::condition_of(const Address& a) const {
  if (!plan_) return {};
  auto it = plan_->assignment.find(a);
  return it == plan_->assignment.end() ? std::string{} : it->second.code();
}

Session& Platform::session_ref(const Address& a) {
  auto it = sessions_.find(a);
  if (it == sessions_.end()) throw Error(ErrorKind::kNotFound, "NO_SESSION", "no session for " + a);
  return it->second;
}

const Session& Platform::session_ref(const Address& a) const {
  auto it = sessions_.find(a);
  if (it == sessions_.end()) throw Error(ErrorKind::kNotFound, "NO_SESSION", "no session for " + a);
  return it->second;
}

// ---- registration ----------------------------------------------------------------

Address Platform::register_participant(std::span<const std::uint8_t> public_key) {
  const Address address = identity::derive_address(public_key);
  std::lock_guard lock(mu_);
  if (auto it = participants_.find(address); it != participants_.end()) return address;
  commit(EventKind::kParticipantRegistered, Json{{"address", address}, {"public_key", to_hex(public_key)}});
  return address;
}

void Platform::apply_registered(const Json& p) {
  const Bytes key = from_hex(p.at("public_key").get<std::string>());
  const Address address = identity::derive_address(key);
  if (address != p.at("address").get<std::string>()) corrupt("address does not match public key");
  if (participants_.contains(address)) {
    throw Error(ErrorKind::kConflict, "ALREADY_REGISTERED", address + " is already registered");
  }
  participants_.emplace(address, key);
}

// ---- spaces, assignment, minting ---------------------------------------------------

spaces::Space Platform::create_space(spaces::SpaceConfig config, const Address& caller) {
  std::lock_guard lock(mu_);
  require_operator(caller);
  commit(EventKind::kSpaceCreated, Json{{"space", space_config_to_json(config)}, {"caller", caller}});
  return registry_.space(config.id);
}

void Platform::apply_space_created(const Json& p, TimestampMs at) {
  auto config = space_config_from_json(p.at("space"));
  if (!config.condition.empty()) experiment::parse_condition(config.condition);
  const auto id = config.id;
  registry_.create_space(std::move(config), p.at("caller").get<std::string>(), at);
  ledger_.declare_space(id);
}

experiment::AssignmentPlan Platform::assign_conditions(std::uint64_t seed, const Address& caller) {
  std::lock_guard lock(mu_);
  require_operator(caller);
  if (plan_) throw Error(ErrorKind::kConflict, "ALREADY_ASSIGNED", "conditions were already assigned");
  std::vector<Address> pool;
  for (const auto& [addr, _] : participants_) {
    if (!options_.operators.contains(addr)) pool.push_back(addr);
  }
  auto plan = experiment::assign(pool, seed);
  Json map = Json::object();
  for (const auto& [addr, cond] : plan.assignment) map[addr] = cond.code();
  commit(EventKind::kAssignment, Json{{"seed", seed}, {"assignment", map}, {"caller", caller}});
  return *plan_;
}

void Platform::apply_assignment(const Json& p) {
  if (plan_) throw Error(ErrorKind::kConflict, "ALREADY_ASSIGNED", "conditions were already assigned");
  experiment::AssignmentPlan plan;
  plan.seed = p.at("seed").get<std::uint64_t>();
  for (const auto& [addr, code] : p.at("assignment").items()) {
    if (!participants_.contains(addr)) corrupt("assignment names unregistered " + addr);
    const auto cond = experiment::parse_condition(code.get<std::string>());
    plan.assignment.emplace(addr, cond);
    ++plan.counts[experiment::condition_index(cond)];
  }
  plan_ = std::move(plan);
}

std::vector<ledger::TokenGrant> Platform::mint(const std::string& space_id, const Address& caller,
                                               std::vector<Address> participants) {
  std::lock_guard lock(mu_);
  const auto space = registry_.space(space_id);
  if (!space.is_admin(caller) && !(is_operator(caller) && !options_.operators.empty())) {
    throw Error(ErrorKind::kForbidden, "NOT_ADMIN", caller + " may not mint in " + space_id);
  }
  if (participants.empty()) {
    if (!plan_ || space.config.condition.empty()) {
      throw Error(ErrorKind::kConflict, "NOT_ASSIGNED", "no participant list and no condition assignment for " + space_id);
    }
    participants = plan_->members(experiment::parse_condition(space.config.condition));
  }
  for (const auto& a : participants) {
    if (!participants_.contains(a)) throw Error(ErrorKind::kInvalidArgument, "UNKNOWN_PARTICIPANT", a);
  }
  auto policy = space.config.power;
  if (policy.total_supply == 0) policy.total_supply = options_.tokens_per_head * participants.size();
  auto grants = ledger::mint(space_id, participants, policy);  // validates; the ledger records in apply
  Json policy_json = space_config_to_json(space.config).at("power");
  policy_json["total_supply"] = policy.total_supply;
  commit(EventKind::kMint, Json{{"space_id", space_id},
                                {"participants", participants},
                                {"policy", policy_json},
                                {"grants", grants_to_json(grants)},
                                {"caller", caller}});
  return grants;
}

void Platform::apply_mint(const Json& p) {
  const auto space_id = p.at("space_id").get<std::string>();
  const auto participants = p.at("participants").get<std::vector<Address>>();
  const auto& pj = p.at("policy");
  ledger::PowerPolicy policy;
  policy.kind = ledger::parse_power_kind(pj.at("kind").get<std::string>());
  policy.total_supply = pj.at("total_supply").get<ledger::Amount>();
  policy.top_fraction = parse_ratio(pj.at("top_fraction").get<std::string>());
  policy.top_share = parse_ratio(pj.at("top_share").get<std::string>());
  policy.rng_seed = pj.at("rng_seed").get<std::uint64_t>();
  for (const auto& a : participants) {
    if (!participants_.contains(a)) corrupt("mint names unregistered " + a);
  }
  auto expected = ledger::mint(space_id, participants, policy);
  if (grants_to_json(expected) != p.at("grants")) corrupt("recorded grants differ from recomputed grants");
  ledger_.mint(space_id, participants, policy);
}

// ---- proposals ---------------------------------------------------------------------

spaces::Proposal Platform::open_proposal(const std::string& space_id, std::vector<std::string> options,
                                         const Address& caller) {
  std::lock_guard lock(mu_);
  const auto before = registry_.proposals_in(space_id).size();
  commit(EventKind::kProposalOpened, Json{{"space_id", space_id},
                                          {"options", options},
                                          {"caller", caller},
                                          {"proposal_id", space_id + "-p" + std::to_string(before + 1)}});
  return registry_.proposal(space_id + "-p" + std::to_string(before + 1));
}

void Platform::apply_proposal_opened(const Json& p, TimestampMs at) {
  const auto space_id = p.at("space_id").get<std::string>();
  std::optional<ledger::LedgerSnapshot> snapshot;
  if (ledger_.is_minted(space_id)) snapshot = ledger_.snapshot(space_id, at);
  auto proposal = registry_.open_proposal(space_id, p.at("options").get<std::vector<std::string>>(),
                                          p.at("caller").get<std::string>(), at, snapshot);
  if (proposal.id != p.at("proposal_id").get<std::string>()) corrupt("proposal id mismatch");
  boxes_.emplace(proposal.id, std::make_unique<tally::BallotBox>());
}

BallotReceipt Platform::cast_ballot(const tally::SignedBallot& ballot) {
  std::lock_guard lock(mu_);
  const auto& voter = ballot.ballot.voter;
  auto key_it = participants_.find(voter);
  if (key_it == participants_.end()) {
    throw Error(ErrorKind::kInvalidArgument, "UNKNOWN_VOTER", voter + " is not registered");
  }
  const auto existing = boxes_.count(ballot.ballot.proposal_id)
                            ? boxes_.at(ballot.ballot.proposal_id)->latest_for(voter)
                            : std::nullopt;
  commit(EventKind::kBallotCast, Json{{"ballot", ballot.ballot.to_json()},
                                      {"signature", to_hex(ballot.signature)},
                                      {"public_key", to_hex(key_it->second)}});
  auto last = *chain_.last();
  return {last.seq, last.hash, !existing || existing->cast_at <= ballot.ballot.cast_at};
}

void Platform::apply_ballot(const Json& p, TimestampMs at) {
  tally::SignedBallot sb{tally::Ballot::from_json(p.at("ballot")), from_hex(p.at("signature").get<std::string>())};
  const auto key = from_hex(p.at("public_key").get<std::string>());
  auto key_it = participants_.find(sb.ballot.voter);
  if (key_it == participants_.end() || key_it->second != key) {
    throw Error(ErrorKind::kInvalidArgument, "UNKNOWN_VOTER", sb.ballot.voter + " is not registered");
  }
  const auto proposal = registry_.proposal(sb.ballot.proposal_id);
  if (auto rejection = tally::validate_ballot(sb, proposal, proposal.snapshot, key)) {
    const auto kind = *rejection == tally::Rejection::kClosed ? ErrorKind::kConflict : ErrorKind::kInvalidArgument;
    throw Error(kind, std::string(tally::to_string(*rejection)),
                "ballot from " + sb.ballot.voter + " rejected: " + std::string(tally::to_string(*rejection)));
  }
  // The signed cast_at is the voter's claim; the server clock decides the window.
  if (!proposal.accepts_at(at)) {
    throw Error(ErrorKind::kConflict, "CLOSED", proposal.id + " does not accept ballots now");
  }
  if (sb.ballot.cast_at > at + kMaxClockSkew) {
    throw Error(ErrorKind::kInvalidArgument, "CLOCK_SKEW", "ballot cast_at is ahead of the server clock");
  }
  Session* session = nullptr;
  if (options_.require_deliberation) {
    auto it = sessions_.find(sb.ballot.voter);
    if (it == sessions_.end() ||
        (it->second.state != SessionState::kVoting && it->second.state != SessionState::kDone) ||
        it->second.aborted) {
      throw Error(ErrorKind::kConflict, "NOT_VOTING",
                  sb.ballot.voter + " has not reached the voting step of deliberation");
    }
    session = &it->second;
  }
  boxes_.at(proposal.id)->record(sb.ballot);
  if (session && session->state == SessionState::kVoting) {
    *session = deliberation::advance(*session, SessionEvent::kBallotAccepted, sb.ballot.cast_at, options_.gates);
  }
}

spaces::Proposal Platform::close_proposal(const std::string& proposal_id, const Address& caller, bool force) {
  std::lock_guard lock(mu_);
  commit(EventKind::kProposalClosed, Json{{"proposal_id", proposal_id}, {"caller", caller}, {"force", force}});
  return registry_.proposal(proposal_id);
}

void Platform::apply_proposal_closed(const Json& p, TimestampMs at) {
  registry_.close_proposal(p.at("proposal_id").get<std::string>(), at, p.at("caller").get<std::string>(),
                           p.at("force").get<bool>());
}

tally::TallyResult Platform::publish(const std::string& proposal_id, const Address& caller) {
  std::lock_guard lock(mu_);
  const auto proposal = registry_.proposal(proposal_id);
  const auto space = registry_.space(proposal.space_id);
  if (!space.is_admin(caller)) throw Error(ErrorKind::kForbidden, "NOT_ADMIN", caller + " may not publish");
  const auto ballots = boxes_.at(proposal_id)->latest();
  auto result = tally::tally(proposal, ballots, space.config.method, space.config.success_threshold);
  Json scores = Json::array();
  for (double s : result.scores) scores.push_back(format_score(s));
  commit(EventKind::kResultPublished, Json{{"proposal_id", proposal_id},
                                           {"caller", caller},
                                           {"winner", result.winner.indices},
                                           {"turnout", result.turnout},
                                           {"scores", scores}});
  return results_.at(proposal_id);
}

void Platform::apply_result(const Json& p) {
  const auto pid = p.at("proposal_id").get<std::string>();
  const auto proposal = registry_.proposal(pid);
  const auto space = registry_.space(proposal.space_id);
  const auto ballots = boxes_.at(pid)->latest();
  auto result = tally::tally(proposal, ballots, space.config.method, space.config.success_threshold);
  if (Json(result.winner.indices) != p.at("winner") || result.turnout != p.at("turnout").get<std::size_t>()) {
    corrupt("published result differs from recomputed tally for " + pid);
  }
  registry_.publish(pid);
  results_[pid] = std::move(result);
}

// ---- deliberation -----------------------------------------------------------------

Session Platform::start_session(const Address& participant) {
  std::lock_guard lock(mu_);
  commit(EventKind::kSessionAdvanced, Json{{"participant", participant}, {"event", "open"}});
  return sessions_.at(participant);
}

Session Platform::advance_session(const Address& participant, SessionEvent event) {
  std::lock_guard lock(mu_);
  if (event == SessionEvent::kBallotAccepted) {
    throw Error(ErrorKind::kConflict, "ILLEGAL_TRANSITION", "ballot_accepted is raised by casting a ballot");
  }
  commit(EventKind::kSessionAdvanced,
         Json{{"participant", participant}, {"event", deliberation::to_string(event)}});
  return sessions_.at(participant);
}

Session Platform::answer_value_prompt(const Address& participant, deliberation::ValueAnswer answer) {
  std::lock_guard lock(mu_);
  commit(EventKind::kSessionAdvanced,
         Json{{"participant", participant}, {"event", "answer"}, {"answer", deliberation::to_string(answer)}});
  return sessions_.at(participant);
}

void Platform::apply_session(const Json& p, TimestampMs at) {
  const auto participant = p.at("participant").get<std::string>();
  const auto event = p.at("event").get<std::string>();
  if (event == "open") {
    if (!participants_.contains(participant)) {
      throw Error(ErrorKind::kNotFound, "UNKNOWN_PARTICIPANT", participant + " is not registered");
    }
    if (sessions_.contains(participant)) {
      throw Error(ErrorKind::kConflict, "SESSION_EXISTS", "session already exists for " + participant);
    }
    sessions_.emplace(participant, deliberation::start_session(participant, at));
    return;
  }
  Session& current = session_ref(participant);
  if (event == "answer") {
    current = deliberation::answer_value_prompt(
        current, deliberation::parse_value_answer(p.at("answer").get<std::string>()), options_.seed_case, at);
    return;
  }
  auto next = deliberation::advance(current, deliberation::parse_session_event(event), at, options_.gates);
  if (next.state == SessionState::kGroupRoom && current.state != SessionState::kGroupRoom) {
    auto cond = condition_of(participant);
    if (cond.empty()) cond = "open";  // not yet randomized: one shared pool
    next.room_id = rooms_.assign(participant, cond)->id();
  }
  current = std::move(next);
}

deliberation::AiExchange Platform::ai_turn(const Address& participant, const std::string& text) {
  std::shared_ptr<std::mutex> turn_lock;
  {
    std::lock_guard lock(ai_mu_);
    auto& slot = ai_locks_[participant];
    if (!slot) slot = std::make_shared<std::mutex>();
    turn_lock = slot;
  }
  std::lock_guard serial(*turn_lock);

  Session snapshot;
  {
    std::lock_guard lock(mu_);
    snapshot = session_ref(participant);
  }
  auto exchange = deliberation::run_ai_exchange(snapshot, text, options_.responder, options_.ai_timeout,
                                                options_.seed_case);
  std::lock_guard lock(mu_);
  commit(EventKind::kAiExchange, Json{{"participant", participant},
                                      {"prompt", exchange.prompt},
                                      {"reply", exchange.reply},
                                      {"fallback_used", exchange.fallback_used}});
  return exchange;
}

void Platform::apply_ai_exchange(const Json& p, TimestampMs at) {
  Session& current = session_ref(p.at("participant").get<std::string>());
  deliberation::AiExchange ex;
  ex.prompt = p.at("prompt").get<std::string>();
  ex.reply = p.at("reply").get<std::string>();
  ex.fallback_used = p.at("fallback_used").get<bool>();
  if (ex.prompt.empty() || ex.reply.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "EMPTY_TEXT", "AI exchange with empty text");
  }
  current = deliberation::record_ai_exchange(current, ex, at);
}

Session Platform::submit_survey(const Address& participant, experiment::SurveyResponse response) {
  response.participant = participant;
  response.validate();
  std::lock_guard lock(mu_);
  commit(EventKind::kSurveySubmitted, Json{{"participant", participant}, {"survey", response.to_json()}});
  return sessions_.at(participant);
}

void Platform::apply_survey(const Json& p, TimestampMs at) {
  const auto participant = p.at("participant").get<std::string>();
  auto response = experiment::SurveyResponse::from_json(p.at("survey"));
  if (response.participant != participant) corrupt("survey participant mismatch");
  Session& current = session_ref(participant);
  current = deliberation::advance(current, SessionEvent::kSurveyDone, at, options_.gates);
  surveys_[participant] = std::move(response);
}

deliberation::RoomMessage Platform::post_room_message(const std::string& room_id, const Address& author,
                                                      const std::string& text) {
  std::lock_guard lock(mu_);
  commit(EventKind::kRoomMessage, Json{{"room_id", room_id}, {"author", author}, {"text", text}});
  return rooms_.room(room_id)->messages().back();
}

void Platform::apply_room_message(const Json& p, TimestampMs at) {
  rooms_.room(p.at("room_id").get<std::string>())
      ->post(p.at("author").get<std::string>(), p.at("text").get<std::string>(), at);
}

// ---- queries -------------------------------------------------------------------

bool Platform::is_registered(const Address& a) const {
  std::lock_guard lock(mu_);
  return participants_.contains(a);
}

Bytes Platform::public_key(const Address& a) const {
  std::lock_guard lock(mu_);
  auto it = participants_.find(a);
  if (it == participants_.end()) throw Error(ErrorKind::kNotFound, "UNKNOWN_PARTICIPANT", a + " is not registered");
  return it->second;
}

std::vector<Address> Platform::participants() const {
  std::lock_guard lock(mu_);
  std::vector<Address> out;
  for (const auto& [a, _] : participants_) out.push_back(a);
  return out;
}

spaces::Space Platform::space(const std::string& id) const { return registry_.space(id); }
std::vector<spaces::Space> Platform::spaces() const { return registry_.spaces(); }
spaces::Proposal Platform::proposal(const std::string& id) const { return registry_.proposal(id); }
std::vector<spaces::Proposal> Platform::proposals() const { return registry_.proposals(); }

std::optional<experiment::AssignmentPlan> Platform::assignment() const {
  std::lock_guard lock(mu_);
  return plan_;
}

std::vector<ledger::TokenGrant> Platform::grants(const std::string& space_id) const {
  return ledger_.grants(space_id);
}

std::optional<tally::TallyResult> Platform::result(const std::string& proposal_id) const {
  std::lock_guard lock(mu_);
  auto it = results_.find(proposal_id);
  if (it == results_.end()) return std::nullopt;
  return it->second;
}

std::vector<tally::Ballot> Platform::ballots(const std::string& proposal_id) const {
  std::lock_guard lock(mu_);
  const auto p = registry_.proposal(proposal_id);
  if (p.status == spaces::ProposalStatus::kDraft || p.status == spaces::ProposalStatus::kOpen) {
    throw Error(ErrorKind::kConflict, "NOT_CLOSED", "ballots are sealed until " + proposal_id + " closes");
  }
  return boxes_.at(proposal_id)->latest();
}

Session Platform::session(const Address& participant) const {
  std::lock_guard lock(mu_);
  return session_ref(participant);
}

bool Platform::has_session(const Address& participant) const {
  std::lock_guard lock(mu_);
  return sessions_.contains(participant);
}

std::shared_ptr<deliberation::Room> Platform::room(const std::string& id) const { return rooms_.room(id); }

std::vector<experiment::SurveyResponse> Platform::surveys() const {
  std::lock_guard lock(mu_);
  std::vector<experiment::SurveyResponse> out;
  for (const auto& [_, s] : surveys_) out.push_back(s);
  return out;
}

experiment::ConditionSummary Platform::condition_summary() const {
  std::lock_guard lock(mu_);
  std::map<experiment::Condition, std::vector<std::vector<std::uint64_t>>> by_condition;
  for (const auto& space : registry_.spaces()) {
    if (space.config.condition.empty()) continue;
    const auto cond = experiment::parse_condition(space.config.condition);
    for (const auto& p : registry_.proposals_in(space.config.id)) {
      if (p.status != spaces::ProposalStatus::kPublished) continue;
      for (const auto& b : boxes_.at(p.id)->latest()) by_condition[cond].push_back(b.allocation);
    }
  }
  if (by_condition.empty()) {
    throw Error(ErrorKind::kConflict, "EMPTY", "no published proposal with ballots to summarize");
  }
  return experiment::condition_summary(by_condition);
}

experiment::ResponsesByCondition Platform::surveys_by_condition() const {
  std::lock_guard lock(mu_);
  experiment::ResponsesByCondition out;
  for (const auto& [addr, s] : surveys_) {
    const auto code = condition_of(addr);
    if (!code.empty()) out[experiment::parse_condition(code)].push_back(s);
  }
  return out;
}

std::vector<std::string> Platform::chain_view(std::uint64_t from) const {
  std::lock_guard lock(mu_);
  std::vector<std::string> lines;
  for (const auto& ev : chain_.events(from)) {
    bool sealed = false;
    if (ev.kind == EventKind::kBallotCast) {
      const auto pid = parse_json(ev.payload).at("ballot").at("proposal_id").get<std::string>();
      sealed = registry_.proposal(pid).status == spaces::ProposalStatus::kOpen;
    }
    if (!sealed) {
      lines.push_back(chain::to_jsonl_line(ev));
      continue;
    }
    nlohmann::ordered_json j;
    j["seq"] = ev.seq;
    j["timestamp"] = ev.timestamp;
    j["kind"] = chain::to_string(ev.kind);
    j["payload"] = "";
    j["prev_hash"] = to_hex(ev.prev_hash);
    j["hash"] = to_hex(ev.hash);
    j["redacted"] = true;
    j["payload_sha256"] = to_hex(sha256(ev.payload));
    lines.push_back(j.dump());
  }
  return lines;
}

Json Platform::state_json() const {
  std::lock_guard lock(mu_);
  Json j;
  Json parts = Json::object();
  for (const auto& [a, k] : participants_) parts[a] = to_hex(k);
  j["participants"] = parts;

  Json spaces_json = Json::array();
  for (const auto& s : registry_.spaces()) {
    spaces_json.push_back({{"config", space_config_to_json(s.config)}, {"created_at", s.created_at}});
    j["grants"][s.config.id] = grants_to_json(ledger_.grants(s.config.id));
  }
  j["spaces"] = spaces_json;

  if (plan_) {
    Json map = Json::object();
    for (const auto& [a, c] : plan_->assignment) map[a] = c.code();
    j["assignment"] = {{"seed", plan_->seed}, {"map", map}, {"counts", plan_->counts}};
  }

  Json proposals_json = Json::array();
  for (const auto& p : registry_.proposals()) {
    auto pj = proposal_to_json(p);
    pj["snapshot"] = p.snapshot.balances;
    Json ballots = Json::array();
    for (const auto& b : boxes_.at(p.id)->latest()) ballots.push_back(b.to_json());
    pj["ballots"] = ballots;
    if (auto it = results_.find(p.id); it != results_.end()) pj["result"] = it->second.to_json();
    proposals_json.push_back(pj);
  }
  j["proposals"] = proposals_json;

  Json sessions = Json::object();
  for (const auto& [a, s] : sessions_) sessions[a] = s.to_json();
  j["sessions"] = sessions;

  Json rooms = Json::object();
  for (const auto& r : rooms_.rooms()) {
    Json msgs = Json::array();
    for (const auto& m : r->messages()) {
      msgs.push_back({{"seq", m.seq}, {"author", m.author}, {"text", m.text}, {"at", m.at}});
    }
    rooms[r->id()] = {{"condition", r->condition()}, {"members", r->members()}, {"messages", msgs}};
  }
  j["rooms"] = rooms;

  Json surveys = Json::object();
  for (const auto& [a, s] : surveys_) surveys[a] = s.to_json();
  j["surveys"] = surveys;
  j["chain_length"] = chain_.size();
  return j;
}

}  // namespace govlab::gateway
