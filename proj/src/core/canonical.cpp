#include "govlab/core/canonical.hpp"

#include "govlab/core/error.hpp"

#include <cmath>

namespace govlab {

namespace {
void reject_floats(const Json& v) {
  // Float formatting is not stable across encoders; canonical payloads carry integers only.
  if (v.is_number_float()) {
    throw Error(ErrorKind::kInvalidArgument, "NON_CANONICAL", "canonical payloads may not contain floats");
  }
  if (v.is_structured()) {
    for (const auto& child : v) reject_floats(child);
  }
}
}  // namespace

std::string canonical_string(const Json& value) {
  reject_floats(value);
  // nlohmann::json stores objects in std::map, so keys come out sorted.
  return value.dump(-1, ' ', false, Json::error_handler_t::strict);
}

Bytes canonical_bytes(const Json& value) { return to_bytes(canonical_string(value)); }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_JSON", e.what());
  }
}

}  // namespace govlab
