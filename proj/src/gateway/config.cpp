#include "govlab/gateway/config.hpp"

#include "govlab/core/error.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace govlab::gateway {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    auto piece = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> default_proposal_options() {
  return {"Keep the current model", "Provide more specific facts", "Integrate a user feedback loop",
          "Analyze speakers' emotions and sentiment"};
}

const ConditionSpaceConfig* ApiConfig::space_for(const experiment::Condition& c) const {
  for (const auto& s : spaces) {
    if (s.condition == c) return &s;
  }
  return nullptr;
}

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::kInvalidArgument, "BAD_CONFIG", "config key '" + key + "': " + why);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    auto x = std::stoull(v, &used);
    if (used != v.size()) bad(key, "not an integer");
    return x;
  } catch (const std::logic_error&) {
    bad(key, "not an integer");
  }
}

}  // namespace

ApiConfig parse_config(const std::string& text) {
  ApiConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto content = trim(line);
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kInvalidArgument, "BAD_CONFIG", "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.raw[trim(content.substr(0, eq))] = trim(content.substr(eq + 1));
  }

  std::vector<std::string> codes = {"qe", "qp", "we", "wp"};
  for (const auto& [key, value] : cfg.raw) {
    if (key == "host") cfg.host = value;
    else if (key == "port") cfg.port = static_cast<int>(to_u64(key, value));
    else if (key == "data_dir") cfg.data_dir = value;
    else if (key == "seed_case") cfg.seed_case_path = value;
    else if (key == "tokens_per_head") cfg.tokens_per_head = to_u64(key, value);
    else if (key == "room_capacity") cfg.room_capacity = to_u64(key, value);
    else if (key == "ai_endpoint") cfg.ai_endpoint = value;
    else if (key == "ai_timeout_ms") cfg.ai_timeout = std::chrono::milliseconds(to_u64(key, value));
    else if (key == "min_ai_turns") cfg.min_ai_turns = to_u64(key, value);
    else if (key == "min_room_dwell_ms") cfg.min_room_dwell = static_cast<TimestampMs>(to_u64(key, value));
    else if (key == "assignment_seed") cfg.assignment_seed = to_u64(key, value);
    else if (key == "mint_seed") cfg.mint_seed = to_u64(key, value);
    else if (key == "snapshot_every") cfg.snapshot_every = to_u64(key, value);
    else if (key == "admins") cfg.admins = split(value, ',');
    else if (key == "conditions") codes = split(value, ',');
    else if (key == "proposal.options") cfg.proposal_options = split(value, '|');
  }
  if (cfg.proposal_options.empty()) cfg.proposal_options = default_proposal_options();
  if (cfg.tokens_per_head == 0) bad("tokens_per_head", "must be positive");

  for (const auto& code : codes) {
    ConditionSpaceConfig sc;
    sc.condition = experiment::parse_condition(code);
    const std::string prefix = "space." + code + ".";
    auto get = [&](const std::string& k) -> const std::string* {
      auto it = cfg.raw.find(prefix + k);
      return it == cfg.raw.end() ? nullptr : &it->second;
    };
    if (auto v = get("duration_ms")) sc.duration = static_cast<TimestampMs>(to_u64(prefix + "duration_ms", *v));
    if (auto v = get("threshold")) sc.threshold = parse_ratio(*v);
    if (auto v = get("top_fraction")) sc.top_fraction = parse_ratio(*v);
    if (auto v = get("top_share")) sc.top_share = parse_ratio(*v);
    cfg.spaces.push_back(sc);
  }
  return cfg;
}

ApiConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "OPEN_FAILED", "cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str());
  // Relative paths in the file resolve against the file's directory.
  const auto base = std::filesystem::path(path).parent_path();
  if (!cfg.seed_case_path.empty() && std::filesystem::path(cfg.seed_case_path).is_relative()) {
    cfg.seed_case_path = (base / cfg.seed_case_path).lexically_normal().string();
  }
  return cfg;
}

void apply_env_overrides(ApiConfig& config) {
  if (const char* port = std::getenv("GOVLAB_PORT"); port && *port) {
    config.port = static_cast<int>(to_u64("GOVLAB_PORT", port));
  }
  if (const char* dir = std::getenv("GOVLAB_DATA_DIR"); dir && *dir) config.data_dir = dir;
}

void check_paths(const ApiConfig& config) {
  if (!config.seed_case_path.empty() && !std::filesystem::exists(config.seed_case_path)) {
    throw Error(ErrorKind::kInvalidArgument, "MISSING_PATH", "seed case file not found: " + config.seed_case_path);
  }
}

}  // namespace govlab::gateway
