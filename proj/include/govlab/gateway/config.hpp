#pragma once

// Operator configuration. Plain `key = value` lines; `#` starts a comment.
//
//   host = 127.0.0.1
//   port = 8080
//   data_dir = ./data
//   seed_case = config/seed_case.json
//   admins = 0xabc...,0xdef...
//   conditions = qe,qp,we,wp
//   space.qe.duration_ms = 172800000
//   space.qe.threshold = 1/4
//   space.qp.top_fraction = 1/5
//   space.qp.top_share = 4/5
//   tokens_per_head = 100
//   room_capacity = 10
//   ai_endpoint = http://127.0.0.1:9100/reply   # empty: built-in echo responder
//   ai_timeout_ms = 15000
//   min_ai_turns = 3
//   min_room_dwell_ms = 300000
//   assignment_seed = 7
//   mint_seed = 11
//   snapshot_every = 100
//   proposal.options = Option A | Option B | ...
//
// GOVLAB_PORT and GOVLAB_DATA_DIR override port and data_dir.

#include "govlab/core/clock.hpp"
#include "govlab/core/ratio.hpp"
#include "govlab/experiment/assignment.hpp"
#include "govlab/ledger/token_ledger.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace govlab::gateway {

struct ConditionSpaceConfig {
  experiment::Condition condition;
  TimestampMs duration = 48 * kHour;
  Ratio threshold{1, 4};
  Ratio top_fraction{1, 5};
  Ratio top_share{4, 5};
};

struct ApiConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "./data";
  std::string seed_case_path;
  std::vector<ConditionSpaceConfig> spaces;
  ledger::Amount tokens_per_head = ledger::kTokensPerHead;
  std::size_t room_capacity = 10;
  std::string ai_endpoint;
  std::chrono::milliseconds ai_timeout{15'000};
  std::size_t min_ai_turns = 3;
  TimestampMs min_room_dwell = 5 * kMinute;
  std::uint64_t assignment_seed = 0;
  std::uint64_t mint_seed = 0;
  std::size_t snapshot_every = 100;
  std::vector<std::string> admins;
  std::vector<std::string> proposal_options;

  /// Every key as read, including ones only other tools understand.
  std::map<std::string, std::string> raw;

  const ConditionSpaceConfig* space_for(const experiment::Condition& c) const;
};

/// The four study options, used when `proposal.options` is not set.
std::vector<std::string> default_proposal_options();

/// Throws InvalidArgument "BAD_CONFIG" naming the line.
ApiConfig parse_config(const std::string& text);
ApiConfig load_config(const std::string& path);
void apply_env_overrides(ApiConfig& config);
/// Checks that referenced files exist. Throws InvalidArgument "MISSING_PATH".
void check_paths(const ApiConfig& config);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace govlab::gateway
