#pragma once

// Durable event store: <data_dir>/events.jsonl is the source of truth, one
// line per event, appended and flushed before the event is committed in
// memory. <data_dir>/state-snapshot.json records the digest of the derived
// state every `snapshot_every` events; startup replays the log and checks it.

#include "govlab/gateway/config.hpp"
#include "govlab/gateway/platform.hpp"

#include <fstream>
#include <memory>
#include <string>

namespace govlab::gateway {

inline constexpr const char* kEventsFile = "events.jsonl";
inline constexpr const char* kSnapshotFile = "state-snapshot.json";

/// SHA-256 over the dumped state_json.
Digest state_digest(const Platform& platform);

class EventStore {
 public:
  /// Creates the directory when missing. A broken, malformed or truncated log
  /// throws chain::BrokenChain with the seq; a snapshot digest mismatch throws
  /// Corrupt "SNAPSHOT_MISMATCH" naming the seq.
  static std::unique_ptr<EventStore> open(const std::string& data_dir, PlatformOptions options, Clock clock,
                                          std::size_t snapshot_every = 100);

  Platform& platform() { return *platform_; }
  const Platform& platform() const { return *platform_; }
  const std::string& dir() const { return dir_; }
  std::string events_path() const;
  /// Writes state-snapshot.json for the current state.
  void write_snapshot();
  /// Writes the snapshot if `snapshot_every` events have landed since the last one.
  /// Call after the command returns; the digest must not be taken mid-commit.
  void maybe_snapshot();

 private:
  EventStore() = default;
  void persist(const chain::ChainEvent& ev);

  std::string dir_;
  std::size_t snapshot_every_ = 100;
  std::ofstream log_;
  bool failed_ = false;
  bool pending_snapshot_ = false;
  std::unique_ptr<Platform> platform_;
};

/// Options for a deployment: gates, capacity, seed case, tokens per head, operators.
PlatformOptions platform_options(const ApiConfig& config, std::shared_ptr<deliberation::AiResponder> responder);

/// Space id for a condition: "space-<code>".
std::string space_id_for(const experiment::Condition& c);
spaces::SpaceConfig space_config_for(const ConditionSpaceConfig& c, std::uint64_t mint_seed);

}  // namespace govlab::gateway
