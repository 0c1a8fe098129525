// Run configuration: every tunable of the simulator in one tree, with
// field-level validation and JSON overlay for the CLI.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "woin/packet.hpp"
#include "woin/time_types.hpp"

namespace woin {

enum class SchedulerMode : int {
  AUORA_LASA = 0,  // payment-weighted LTE assignment + learned prices + auction DBA
  IPACT = 1,       // throughput LTE assignment + limited-service polling DBA
  THROUGHPUT = 2,  // throughput LTE assignment + auction DBA at base prices
};

std::string to_string(SchedulerMode mode);
bool scheduler_mode_from_string(const std::string& s, SchedulerMode* out);

// One MCS step: lowest SINR at which it is usable and the bytes one RC
// (6 PRBs x 1 ms) carries at its efficiency.
struct McsEntry {
  double threshold_db = 0.0;
  std::int32_t bytes_per_rc = 0;
};

struct ChannelConfig {
  double pathloss_a = 128.1;        // PL(d) = A + B*log10(d/1km), dB
  double pathloss_b = 37.6;
  double shadowing_sigma_db = 4.0;
  double p_max_dbm = 24.0;
  double p_o_dbm = -106.0;          // per-PRB open-loop target
  double alpha = 1.0;
  bool power_control_uses_min = true;  // standard closed form; false keeps the max() form
  int n_prb_per_rc = 6;
  int rc_count = 8;                 // floor(48 data PRBs / 6)
  double center_frequency_ghz = 2.0;
  double noise_figure_db = 5.0;
  int interferer_count = 6;         // one per first-tier cell
  bool interferers_full_power = false;  // true = always P_max instead of power control
  double inter_site_distance_m = 500.0;
  std::vector<McsEntry> mcs_table;  // empty = built-in default table
};

const std::vector<McsEntry>& default_mcs_table();

// A homogeneous group of UEs attached to one cell.
struct UeGroupConfig {
  int count = 0;
  double mean_on_s = 1.0;
  double mean_off_s = 1.5;
  double talkspurt_rate_bps = 64000.0;  // emission rate while ON
  Microseconds packet_interval_us = 20000;
  double sla_rate_bytes_per_s = 0.0;    // 0 = GAA (no SLA)
  bool learning = true;                 // false = fixed base price for ASLA
  PacketClass pkt_class = PacketClass::kVoice;
};

struct LteCellConfig {
  std::vector<UeGroupConfig> groups;
  bool use_ppp = false;            // draw UE count from a PPP instead of fixed counts
  double ppp_intensity_per_km2 = 0.0;
  double cell_radius_m = 250.0;
  double min_ue_distance_m = 10.0;
};

// Traffic injected directly at a non-LTE ONU.
struct BackgroundConfig {
  double offered_bytes_per_s = 0.0;
  double sla_fraction = 0.0;       // share of bytes marked SLA (token bucket)
  std::int64_t asla_price = 1;     // fixed price per byte for ASLA bytes
  std::int32_t min_packet_bytes = 64;
  std::int32_t max_packet_bytes = 1518;
};

struct SchedConfig {
  int window_ttis = 100;           // sliding SLA window length
  int buffer_state_count = 4;      // |S|
  std::int64_t base_price = 1;     // chi, per byte
  std::vector<std::int64_t> price_levels = {2, 3, 4, 5};  // multiples of chi
  std::int64_t ue_buffer_bytes = 262144;
  Microseconds voice_deadline_us = 100000;
  Microseconds video_deadline_us = 150000;
  Microseconds data_deadline_us = 300000;
};

struct LaConfig {
  // The normalized penalty update spreads mass v/(|A|-1) over the other
  // actions, which keeps the row sum at 1. raw_negative reproduces the
  // v/(1-|A|) form instead (row sum 1-2v); only for fidelity experiments.
  bool raw_negative_penalty_spread = false;
};

struct TraceConfig {
  std::string la_trace_path;       // per-TTI action probabilities, CSV
  std::string auction_trace_path;  // per-cycle auction ledger, CSV
};

struct RunConfig {
  std::uint64_t seed = 1;
  double sim_duration_s = 10.0;
  int onu_count = 16;
  double link_rate_bps = 1e9;
  Microseconds guard_us = 5;
  Microseconds max_cycle_us = 2000;
  Microseconds prop_delay_min_us = 50;
  Microseconds prop_delay_max_us = 100;
  double lte_share = 0.10;         // share of EPON capacity budgeted to LTE ONUs
  SchedulerMode scheduler_mode = SchedulerMode::AUORA_LASA;
  int report_bytes = 64;

  LteCellConfig cell;              // attached to ONU 0
  std::vector<BackgroundConfig> background;  // ONUs 1..onu_count-1; missing = idle
  ChannelConfig radio;
  SchedConfig sched;
  LaConfig la;
  TraceConfig trace;

  // Every problem found, as "field: message" lines; empty = valid.
  std::vector<std::string> validate() const;

  std::int64_t max_price() const;  // P-bar - 1
  std::int64_t price_bar() const { return max_price() + 1; }
  Microseconds packet_deadline_us(PacketClass c) const;
};

// JSON bridge. parse_* throws std::runtime_error with a field path on type
// errors or unknown keys; overlay applies only the keys present.
std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& json_text);
void overlay_run_config_json(RunConfig* cfg, const std::string& json_text);

std::vector<McsEntry> mcs_table_from_json_file(const std::string& path);

}  // namespace woin
