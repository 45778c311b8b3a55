#pragma once

// Realtime room channel framing: each frame is a 4-byte big-endian length
// followed by that many bytes of canonical JSON. Used over plain HTTP bodies
// (POST for client frames, chunked GET stream for server frames).

#include "govlab/core/canonical.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace govlab::gateway {

inline constexpr std::size_t kMaxFrameBytes = 64 * 1024;

std::string encode_frame(const Json& j);

/// Incremental decoder. feed() bytes as they arrive, next() pops complete frames.
class FrameDecoder {
 public:
  void feed(std::string_view bytes);
  /// Throws InvalidArgument "FRAME_TOO_LARGE" / "BAD_JSON".
  std::optional<Json> next();
  std::size_t buffered() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
};

/// Decodes a complete body. Trailing partial frame -> InvalidArgument "TRUNCATED_FRAME".
std::vector<Json> decode_frames(std::string_view body);

}  // namespace govlab::gateway
