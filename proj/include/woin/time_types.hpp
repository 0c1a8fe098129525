// Integer-microsecond time base shared by the LTE and EPON event chains.
#pragma once

#include <cstdint>

namespace woin {

using Microseconds = std::int64_t;

inline constexpr Microseconds kTtiUs = 1000;          // LTE TTI, 1 ms
inline constexpr Microseconds kUsPerSecond = 1'000'000;

inline constexpr Microseconds seconds_to_us(double s) {
  return static_cast<Microseconds>(s * static_cast<double>(kUsPerSecond));
}

// Transmission time of `bytes` at `rate_bps`, rounded up to whole us so that
// back-to-back slots computed from byte counts never overlap.
inline Microseconds tx_duration_us(std::int64_t bytes, double rate_bps) {
  if (bytes <= 0) return 0;
  const double us = static_cast<double>(bytes) * 8.0 * 1e6 / rate_bps;
  const auto whole = static_cast<Microseconds>(us);
  return (static_cast<double>(whole) < us) ? whole + 1 : whole;
}

}  // namespace woin
