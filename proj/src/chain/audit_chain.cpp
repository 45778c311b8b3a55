#include "govlab/chain/audit_chain.hpp"

#include "govlab/core/canonical.hpp"
#include "govlab/core/crypto.hpp"

#include <fstream>
#include <istream>
#include <ostream>

namespace govlab::chain {

namespace {
constexpr std::pair<EventKind, std::string_view> kKindNames[] = {
    {EventKind::kMint, "MINT"},
    {EventKind::kSpaceCreated, "SPACE_CREATED"},
    {EventKind::kProposalOpened, "PROPOSAL_OPENED"},
    {EventKind::kBallotCast, "BALLOT_CAST"},
    {EventKind::kProposalClosed, "PROPOSAL_CLOSED"},
    {EventKind::kResultPublished, "RESULT_PUBLISHED"},
    {EventKind::kParticipantRegistered, "PARTICIPANT_REGISTERED"},
    {EventKind::kAssignment, "ASSIGNMENT"},
    {EventKind::kSessionAdvanced, "SESSION_ADVANCED"},
    {EventKind::kAiExchange, "AI_EXCHANGE"},
    {EventKind::kSurveySubmitted, "SURVEY_SUBMITTED"},
    {EventKind::kRoomMessage, "ROOM_MESSAGE"},
};
}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

EventKind parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  throw Error(ErrorKind::kCorrupt, "BAD_EVENT_KIND", "unknown event kind '" + std::string(name) + "'");
}

Digest compute_hash(std::uint64_t seq, TimestampMs timestamp, EventKind kind, std::string_view payload,
                    const Digest& prev_hash) {
  Sha256Stream h;
  h.update_u64_be(seq)
      .update_u64_be(static_cast<std::uint64_t>(timestamp))
      .update(to_string(kind))
      .update(payload)
      .update(prev_hash);
  return h.finish();
}

Verification verify_chain(std::span<const ChainEvent> events) {
  Digest expected_prev = kGenesisPrev;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const ChainEvent& ev = events[i];
    if (ev.seq != i) return {false, i, "seq " + std::to_string(ev.seq) + " found at position " + std::to_string(i)};
    if (ev.prev_hash != expected_prev) return {false, i, "prev_hash does not match predecessor"};
    if (compute_hash(ev.seq, ev.timestamp, ev.kind, ev.payload, ev.prev_hash) != ev.hash) {
      return {false, i, "hash does not recompute"};
    }
    expected_prev = ev.hash;
  }
  return {};
}

std::string to_jsonl_line(const ChainEvent& event) {
  nlohmann::ordered_json j;
  j["seq"] = event.seq;
  j["timestamp"] = event.timestamp;
  j["kind"] = to_string(event.kind);
  j["payload"] = event.payload;
  j["prev_hash"] = to_hex(event.prev_hash);
  j["hash"] = to_hex(event.hash);
  return j.dump();
}

ChainEvent from_jsonl_line(std::string_view line) {
  try {
    auto j = nlohmann::ordered_json::parse(line);
    ChainEvent ev;
    ev.seq = j.at("seq").get<std::uint64_t>();
    ev.timestamp = j.at("timestamp").get<TimestampMs>();
    ev.kind = parse_event_kind(j.at("kind").get<std::string>());
    ev.payload = j.at("payload").get<std::string>();
    ev.prev_hash = digest_from_hex(j.at("prev_hash").get<std::string>());
    ev.hash = digest_from_hex(j.at("hash").get<std::string>());
    // Only the exact bytes we write are accepted, so "AB" vs "ab" or 1.0 vs 1 cannot slip past.
    if (to_jsonl_line(ev) != line) throw Error(ErrorKind::kCorrupt, "MALFORMED_LINE", "line is not in canonical form");
    return ev;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kCorrupt, "MALFORMED_LINE", e.what());
  } catch (const Error& e) {
    throw Error(ErrorKind::kCorrupt, "MALFORMED_LINE", e.what());
  }
}

void export_jsonl(std::span<const ChainEvent> events, std::ostream& sink) {
  for (const auto& ev : events) sink << to_jsonl_line(ev) << '\n';
  sink.flush();
  if (!sink) throw Error(ErrorKind::kIo, "WRITE_FAILED", "failed writing event log");
}

std::vector<ChainEvent> import_jsonl(std::istream& source) {
  std::vector<ChainEvent> events;
  std::string buffer((std::istreambuf_iterator<char>(source)), std::istreambuf_iterator<char>());
  if (source.bad()) throw Error(ErrorKind::kIo, "READ_FAILED", "failed reading event log");

  // A bad line at index k is reported at seq k unless an earlier event already fails.
  auto fail_at = [&](std::size_t index, const std::string& code, const std::string& reason) {
    auto prefix = verify_chain(events);
    if (!prefix.valid) throw BrokenChain(*prefix.broken_at, prefix.reason);
    throw BrokenChain(index, reason, code);
  };

  std::size_t pos = 0, line_no = 1;
  while (pos < buffer.size()) {
    auto nl = buffer.find('\n', pos);
    if (nl == std::string::npos) {
      fail_at(line_no - 1, "TRUNCATED", "line " + std::to_string(line_no) + " is not newline-terminated");
    }
    std::string_view line(buffer.data() + pos, nl - pos);
    try {
      events.push_back(from_jsonl_line(line));
    } catch (const Error& e) {
      fail_at(line_no - 1, "MALFORMED_LINE", "line " + std::to_string(line_no) + ": " + e.what());
    }
    pos = nl + 1;
    ++line_no;
  }

  auto verdict = verify_chain(events);
  if (!verdict.valid) throw BrokenChain(*verdict.broken_at, verdict.reason);
  return events;
}

std::vector<ChainEvent> load_jsonl_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "OPEN_FAILED", "cannot open " + path);
  return import_jsonl(in);
}

AuditChain::AuditChain(std::vector<ChainEvent> events) : events_(std::move(events)) {}

ChainEvent AuditChain::next_locked(EventKind kind, std::string payload, TimestampMs timestamp) const {
  ChainEvent ev;
  ev.seq = events_.size();
  ev.timestamp = timestamp;
  ev.kind = kind;
  ev.payload = std::move(payload);
  ev.prev_hash = events_.empty() ? kGenesisPrev : events_.back().hash;
  ev.hash = compute_hash(ev.seq, ev.timestamp, ev.kind, ev.payload, ev.prev_hash);
  return ev;
}

ChainEvent AuditChain::prepare(EventKind kind, std::string payload, TimestampMs timestamp) const {
  std::lock_guard lock(mu_);
  return next_locked(kind, std::move(payload), timestamp);
}

void AuditChain::commit(const ChainEvent& event) {
  std::lock_guard lock(mu_);
  const Digest& prev = events_.empty() ? kGenesisPrev : events_.back().hash;
  if (event.seq != events_.size() || event.prev_hash != prev) {
    throw Error(ErrorKind::kConflict, "STALE_EVENT", "event does not extend the current head");
  }
  if (listener_) listener_(event);
  events_.push_back(event);
}

ChainEvent AuditChain::append(EventKind kind, std::string payload, TimestampMs timestamp) {
  std::lock_guard lock(mu_);
  auto ev = next_locked(kind, std::move(payload), timestamp);
  if (listener_) listener_(ev);
  events_.push_back(ev);
  return ev;
}

std::size_t AuditChain::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<ChainEvent> AuditChain::events(std::uint64_t from) const {
  std::lock_guard lock(mu_);
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::optional<ChainEvent> AuditChain::last() const {
  std::lock_guard lock(mu_);
  if (events_.empty()) return std::nullopt;
  return events_.back();
}

Verification AuditChain::verify() const {
  std::lock_guard lock(mu_);
  return verify_chain(events_);
}

void AuditChain::set_listener(Listener listener) {
  std::lock_guard lock(mu_);
  listener_ = std::move(listener);
}

}  // namespace govlab::chain
