// Sliding-window SLA accounting per UE and the derived classification of
// buffered bytes into within-SLA and above-SLA.
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace woin {

struct Classification {
  std::int64_t sla_bytes = 0;
  std::int64_t asla_bytes = 0;
};

class SlaTracker {
 public:
  SlaTracker() = default;
  // gamma_sla: bytes/TTI owed under the SLA; 0 encodes a GAA UE.
  SlaTracker(std::int64_t gamma_sla, int window_ttis)
      : gamma_(gamma_sla),
        omega_(static_cast<std::int64_t>(window_ttis + 1) * gamma_sla),
        window_(static_cast<std::size_t>(window_ttis), 0) {
    if (window_ttis < 1) throw std::invalid_argument("SlaTracker: window must be >= 1");
    if (gamma_sla < 0) throw std::invalid_argument("SlaTracker: gamma_sla must be >= 0");
  }

  std::int64_t phi() const { return phi_; }      // SLA bytes sent in the window
  std::int64_t omega() const { return omega_; }  // (M+1) * gamma
  std::int64_t gamma() const { return gamma_; }

  // Splits beta buffered bytes into (SLA, ASLA) against the remaining window
  // budget omega - phi.
  Classification classify(std::int64_t beta) const {
    if (beta < 0) throw std::invalid_argument("classify: beta must be >= 0");
    if (phi_ >= omega_) return {0, beta};
    const std::int64_t room = omega_ - phi_;
    if (beta <= room) return {beta, 0};
    return {room, beta - room};
  }

  // Remaining SLA byte budget this TTI (used for per-packet marking).
  std::int64_t sla_budget() const { return phi_ >= omega_ ? 0 : omega_ - phi_; }

  // Pushes this TTI's within-SLA transmission count, evicting the oldest.
  void advance_window(std::int64_t t_sla_bytes) {
    if (t_sla_bytes < 0) throw std::invalid_argument("advance_window: negative bytes");
    phi_ -= window_[head_];
    window_[head_] = t_sla_bytes;
    phi_ += t_sla_bytes;
    head_ = (head_ + 1) % window_.size();
  }

  std::int64_t recompute_phi() const {  // audit helper
    return std::accumulate(window_.begin(), window_.end(), std::int64_t{0});
  }

 private:
  std::int64_t gamma_ = 0;
  std::int64_t omega_ = 0;
  std::int64_t phi_ = 0;
  std::vector<std::int64_t> window_;
  std::size_t head_ = 0;
};

// Buffer state s = ceil(asla_bytes * state_count / capacity); 0 iff empty of
// ASLA bytes.
int buffer_state(std::int64_t asla_bytes, std::int64_t capacity, int state_count);

}  // namespace woin
