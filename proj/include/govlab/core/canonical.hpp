#pragma once

#include "govlab/core/bytes.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace govlab {

using Json = nlohmann::json;

/// Key-sorted, whitespace-free UTF-8 encoding. Signatures and chain hashes are
/// computed over exactly these bytes, so every producer must go through here.
std::string canonical_string(const Json& value);
Bytes canonical_bytes(const Json& value);

/// Parses and throws Error(kInvalidArgument, "BAD_JSON") instead of nlohmann's exception.
Json parse_json(std::string_view text);

}  // namespace govlab
