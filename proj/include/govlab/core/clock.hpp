#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>

namespace govlab {

/// UTC milliseconds since the Unix epoch.
using TimestampMs = std::int64_t;

inline constexpr TimestampMs kMinute = 60'000;
inline constexpr TimestampMs kHour = 60 * kMinute;

using Clock = std::function<TimestampMs()>;

inline TimestampMs system_now() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

/// Deterministic clock for simulation and tests; only moves when told to.
class ManualClock {
 public:
  explicit ManualClock(TimestampMs start = 0) : now_(start) {}
  TimestampMs now() const { return now_.load(); }
  void set(TimestampMs t) { now_.store(t); }
  void advance(TimestampMs delta) { now_.fetch_add(delta); }
  Clock as_clock() {
    return [this] { return now(); };
  }

 private:
  std::atomic<TimestampMs> now_;
};

}  // namespace govlab
