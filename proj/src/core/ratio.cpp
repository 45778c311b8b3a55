#include "govlab/core/ratio.hpp"

#include "govlab/core/error.hpp"

#include <charconv>

namespace govlab {

namespace {
std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "BAD_RATIO", "not an integer: '" + std::string(s) + "'");
  }
  return v;
}
}  // namespace

Ratio parse_ratio(const std::string& raw) {
  const auto b = raw.find_first_not_of(" \t");
  const std::string text = b == std::string::npos ? "" : raw.substr(b, raw.find_last_not_of(" \t") - b + 1);
  auto slash = text.find('/');
  Ratio r;
  if (slash == std::string::npos) {
    r = {parse_int(text), 1};
  } else {
    r = {parse_int(std::string_view(text).substr(0, slash)), parse_int(std::string_view(text).substr(slash + 1))};
  }
  if (r.den <= 0 || r.num < 0) throw Error(ErrorKind::kInvalidArgument, "BAD_RATIO", "invalid ratio '" + text + "'");
  return r;
}

}  // namespace govlab
