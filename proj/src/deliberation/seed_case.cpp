#include "govlab/deliberation/seed_case.hpp"

#include "govlab/core/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace govlab::deliberation {

std::string_view to_string(ValueAnswer a) {
  switch (a) {
    case ValueAnswer::kYes: return "yes";
    case ValueAnswer::kNo: return "no";
    case ValueAnswer::kMaybe: return "maybe";
  }
  return "?";
}

ValueAnswer parse_value_answer(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "yes") return ValueAnswer::kYes;
  if (lower == "no") return ValueAnswer::kNo;
  if (lower == "maybe") return ValueAnswer::kMaybe;
  throw Error(ErrorKind::kInvalidArgument, "BAD_ANSWER", "answer must be yes, no or maybe; got '" + lower + "'");
}

const std::string& SeedCase::branch_seed(ValueAnswer a) const {
  switch (a) {
    case ValueAnswer::kYes: return seed_yes;
    case ValueAnswer::kNo: return seed_no;
    case ValueAnswer::kMaybe: break;
  }
  return seed_maybe;
}

Json SeedCase::to_json() const {
  return Json{{"interpretation_text", interpretation_text},
              {"value_question", value_question},
              {"branch_seeds", {{"yes", seed_yes}, {"no", seed_no}, {"maybe", seed_maybe}}},
              {"suggested_topics", suggested_topics}};
}

SeedCase SeedCase::from_json(const Json& j) {
  try {
    SeedCase c;
    c.interpretation_text = j.at("interpretation_text").get<std::string>();
    c.value_question = j.at("value_question").get<std::string>();
    const auto& seeds = j.at("branch_seeds");
    c.seed_yes = seeds.at("yes").get<std::string>();
    c.seed_no = seeds.at("no").get<std::string>();
    c.seed_maybe = seeds.at("maybe").get<std::string>();
    c.suggested_topics = j.value("suggested_topics", std::vector<std::string>{});
    if (c.seed_yes.empty() || c.seed_no.empty() || c.seed_maybe.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "BAD_SEED_CASE", "branch seeds must be non-empty");
    }
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_SEED_CASE", e.what());
  }
}

SeedCase load_seed_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "OPEN_FAILED", "cannot open seed case " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return SeedCase::from_json(parse_json(ss.str()));
}

}  // namespace govlab::deliberation
