#include "govlab/gateway/frames.hpp"

#include "govlab/core/error.hpp"

namespace govlab::gateway {

std::string encode_frame(const Json& j) {
  const std::string body = canonical_string(j);
  if (body.size() > kMaxFrameBytes) {
    throw Error(ErrorKind::kInvalidArgument, "FRAME_TOO_LARGE", "frame of " + std::to_string(body.size()) + " bytes");
  }
  const auto n = static_cast<std::uint32_t>(body.size());
  std::string out;
  out.reserve(4 + body.size());
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xff));
  out += body;
  return out;
}

void FrameDecoder::feed(std::string_view bytes) { buffer_.append(bytes); }

std::optional<Json> FrameDecoder::next() {
  if (buffer_.size() < 4) return std::nullopt;
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | static_cast<std::uint8_t>(buffer_[i]);
  if (n > kMaxFrameBytes) {
    throw Error(ErrorKind::kInvalidArgument, "FRAME_TOO_LARGE", "declared frame length " + std::to_string(n));
  }
  if (buffer_.size() < 4 + n) return std::nullopt;
  Json j = parse_json(std::string_view(buffer_).substr(4, n));
  buffer_.erase(0, 4 + n);
  return j;
}

std::vector<Json> decode_frames(std::string_view body) {
  FrameDecoder dec;
  dec.feed(body);
  std::vector<Json> out;
  while (auto f = dec.next()) out.push_back(std::move(*f));
  if (dec.buffered() != 0) {
    throw Error(ErrorKind::kInvalidArgument, "TRUNCATED_FRAME", std::to_string(dec.buffered()) + " trailing bytes");
  }
  return out;
}

}  // namespace govlab::gateway
