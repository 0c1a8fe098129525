#include "woin/sla_tracker.hpp"

#include <stdexcept>

namespace woin {

int buffer_state(std::int64_t asla_bytes, std::int64_t capacity, int state_count) {
  if (state_count < 1) throw std::invalid_argument("buffer_state: state_count must be >= 1");
  if (capacity < 1) throw std::invalid_argument("buffer_state: capacity must be >= 1");
  if (asla_bytes < 0 || asla_bytes > capacity) {
    throw std::invalid_argument("buffer_state: asla_bytes outside [0, capacity]");
  }
  // ceil(asla * |S| / C) in integer arithmetic
  const std::int64_t num = asla_bytes * static_cast<std::int64_t>(state_count);
  return static_cast<int>((num + capacity - 1) / capacity);
}

}  // namespace woin
