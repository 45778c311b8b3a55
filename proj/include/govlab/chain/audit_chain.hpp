#pragma once

// Hash-linked append-only event log.
//
//   hash = SHA-256(seq_be64 || timestamp_be64 || kind_name || payload || prev_hash)
//
// Event 0 links to 32 zero bytes; seq is gapless from 0.

#include "govlab/core/bytes.hpp"
#include "govlab/core/clock.hpp"
#include "govlab/core/error.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace govlab::chain {

enum class EventKind {
  kMint,
  kSpaceCreated,
  kProposalOpened,
  kBallotCast,
  kProposalClosed,
  kResultPublished,
  // Platform bookkeeping needed to replay sessions and rooms.
  kParticipantRegistered,
  kAssignment,
  kSessionAdvanced,
  kAiExchange,
  kSurveySubmitted,
  kRoomMessage,
};

inline constexpr EventKind kAllKinds[] = {
    EventKind::kMint,           EventKind::kSpaceCreated,    EventKind::kProposalOpened,
    EventKind::kBallotCast,     EventKind::kProposalClosed,  EventKind::kResultPublished,
    EventKind::kParticipantRegistered, EventKind::kAssignment, EventKind::kSessionAdvanced,
    EventKind::kAiExchange,     EventKind::kSurveySubmitted, EventKind::kRoomMessage,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);

inline constexpr Digest kGenesisPrev{};

struct ChainEvent {
  std::uint64_t seq = 0;
  TimestampMs timestamp = 0;
  EventKind kind = EventKind::kMint;
  std::string payload;  // canonical JSON bytes
  Digest prev_hash{};
  Digest hash{};

  friend bool operator==(const ChainEvent&, const ChainEvent&) = default;
};

Digest compute_hash(std::uint64_t seq, TimestampMs timestamp, EventKind kind, std::string_view payload,
                    const Digest& prev_hash);

struct Verification {
  bool valid = true;
  std::optional<std::uint64_t> broken_at;
  std::string reason;
};

/// Reports the earliest index whose seq, link, or digest fails to recompute.
Verification verify_chain(std::span<const ChainEvent> events);

/// Thrown by import when the log does not verify. Code is BROKEN_CHAIN, or
/// MALFORMED_LINE / TRUNCATED when the line at `seq` does not even parse.
class BrokenChain : public Error {
 public:
  BrokenChain(std::uint64_t seq, const std::string& reason, std::string code = "BROKEN_CHAIN")
      : Error(ErrorKind::kCorrupt, std::move(code), "chain broken at seq " + std::to_string(seq) + ": " + reason),
        seq_(seq) {}
  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

/// One JSON object per line, fields in the order seq, timestamp, kind, payload, prev_hash, hash.
std::string to_jsonl_line(const ChainEvent& event);
ChainEvent from_jsonl_line(std::string_view line);

void export_jsonl(std::span<const ChainEvent> events, std::ostream& sink);
/// Every line must be newline-terminated; a missing final newline counts as truncation.
/// Throws BrokenChain (codes BROKEN_CHAIN, MALFORMED_LINE, TRUNCATED).
std::vector<ChainEvent> import_jsonl(std::istream& source);
std::vector<ChainEvent> load_jsonl_file(const std::string& path);

/// Single-appender log. Readers get copies of immutable prefixes.
class AuditChain {
 public:
  using Listener = std::function<void(const ChainEvent&)>;

  AuditChain() = default;
  /// Adopts an already-verified event list.
  explicit AuditChain(std::vector<ChainEvent> events);

  /// Builds the next event without appending it.
  ChainEvent prepare(EventKind kind, std::string payload, TimestampMs timestamp) const;
  /// Appends a prepared event; throws Conflict "STALE_EVENT" if another append landed first.
  void commit(const ChainEvent& event);
  ChainEvent append(EventKind kind, std::string payload, TimestampMs timestamp);

  std::size_t size() const;
  std::vector<ChainEvent> events(std::uint64_t from = 0) const;
  std::optional<ChainEvent> last() const;
  Verification verify() const;

  /// Called under the append lock, in seq order.
  void set_listener(Listener listener);

 private:
  ChainEvent next_locked(EventKind kind, std::string payload, TimestampMs timestamp) const;

  mutable std::mutex mu_;
  std::vector<ChainEvent> events_;
  Listener listener_;
};

}  // namespace govlab::chain
