#pragma once

#include <cstdint>
#include <string>

namespace govlab {

/// Non-negative rational used for policy fractions and thresholds.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool in_open_unit() const { return den > 0 && num > 0 && num < den; }
  bool in_half_open_unit() const { return den > 0 && num > 0 && num <= den; }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

/// Accepts "a/b" or a plain integer. Throws Error(kInvalidArgument, "BAD_RATIO").
Ratio parse_ratio(const std::string& text);

}  // namespace govlab
