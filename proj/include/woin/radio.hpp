// Uplink PHY abstraction: pathloss, open-loop power control, SINR with
// first-tier interference, and the MCS step table mapping SINR to the bytes
// one RC carries per TTI.
#pragma once

#include <cstdint>
#include <vector>

#include "woin/config.hpp"
#include "woin/rng.hpp"
#include "woin/traffic.hpp"

namespace woin {

// Log-distance pathloss A + B*log10(d/1km) in dB. d <= 0 is rejected.
double pathloss_db(double distance_m, const ChannelConfig& cfg);

// Open-loop power control, clipped at P_max when power_control_uses_min.
double tx_power_dbm(double pathloss, int n_prb, const ChannelConfig& cfg);

// Highest MCS whose threshold is <= sinr; 0 bytes below the lowest step.
std::int32_t bytes_per_rc(double sinr_db, const std::vector<McsEntry>& table);

struct LinkState {
  // q[i][j]: bytes UE i could send on RC j this TTI.
  std::vector<std::vector<std::int32_t>> q;
  std::vector<double> sinr_db;  // per (ue, rc), flattened row-major; for traces
};

class RadioModel {
 public:
  RadioModel(const ChannelConfig& cfg, std::vector<Position> ue_positions,
             RngStream* shadow_rng);

  // Redraws per-TTI fading and interferer placement, recomputes SINR and q.
  LinkState refresh_links(RngStream* fading_rng) const;

  int ue_count() const { return static_cast<int>(positions_.size()); }
  double ue_distance_m(int ue) const;
  const std::vector<McsEntry>& mcs_table() const { return table_; }
  std::int32_t max_rc_bytes() const;

 private:
  ChannelConfig cfg_;
  std::vector<Position> positions_;
  std::vector<double> total_loss_db_;  // pathloss + static shadowing per UE
  std::vector<McsEntry> table_;
  double noise_dbm_per_rc_ = 0.0;
};

}  // namespace woin
