#pragma once

#include "govlab/core/canonical.hpp"

#include <string>
#include <vector>

namespace govlab::deliberation {

enum class ValueAnswer { kYes, kNo, kMaybe };

std::string_view to_string(ValueAnswer a);
/// Accepts "yes", "no", "maybe" (any case). Throws InvalidArgument "BAD_ANSWER".
ValueAnswer parse_value_answer(std::string_view s);

/// The case participants deliberate on. Shipped as a JSON document:
///   { "interpretation_text": str, "value_question": str,
///     "branch_seeds": {"yes": str, "no": str, "maybe": str},
///     "suggested_topics": [str, ...] }
struct SeedCase {
  std::string interpretation_text;
  std::string value_question;
  std::string seed_yes;
  std::string seed_no;
  std::string seed_maybe;
  std::vector<std::string> suggested_topics;

  const std::string& branch_seed(ValueAnswer a) const;
  Json to_json() const;
  static SeedCase from_json(const Json& j);
};

SeedCase load_seed_case(const std::string& path);

}  // namespace govlab::deliberation
