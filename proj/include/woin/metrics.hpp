// Per-run counters and the derived report emitted by the CLI.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace woin {

struct PacketCounters {
  std::int64_t generated_packets = 0;
  std::int64_t generated_bytes = 0;
  std::int64_t forwarded_packets = 0;
  std::int64_t forwarded_bytes = 0;
  std::int64_t dropped_lte_deadline = 0;
  std::int64_t dropped_ue_overflow = 0;
  std::int64_t dropped_onu_deadline = 0;
  std::int64_t dropped_onu_overflow = 0;
  std::int64_t residual_packets = 0;  // buffered or in flight at run end

  std::int64_t accounted() const {
    return forwarded_packets + dropped_lte_deadline + dropped_ue_overflow +
           dropped_onu_deadline + dropped_onu_overflow + residual_packets;
  }
};

struct UeMetrics {
  int ue = 0;
  bool learning = false;
  std::int64_t generated_packets = 0;
  std::int64_t forwarded_packets = 0;
  std::int64_t paid_total = 0;       // price-byte units over the whole run
  std::int64_t bytes_total = 0;
  // converged window = second half of the run, ASLA transmissions only
  std::int64_t converged_asla_paid = 0;
  std::int64_t converged_asla_bytes = 0;

  double payment_per_byte() const {
    return bytes_total > 0 ? static_cast<double>(paid_total) / static_cast<double>(bytes_total) : 0.0;
  }
  double converged_payment_per_byte() const {
    return converged_asla_bytes > 0
               ? static_cast<double>(converged_asla_paid) / static_cast<double>(converged_asla_bytes)
               : 0.0;
  }
  double transmission_ratio() const {
    return generated_packets > 0
               ? static_cast<double>(forwarded_packets) / static_cast<double>(generated_packets)
               : 0.0;
  }
};

struct OnuMetrics {
  int onu = 0;
  std::int64_t gross_income = 0;
  std::int64_t refunds = 0;
  double vcg_paid = 0.0;
  double profit() const {
    return static_cast<double>(gross_income - refunds) - vcg_paid;
  }
};

struct RunMetrics {
  std::uint64_t seed = 0;
  double sim_duration_s = 0.0;
  std::string scheduler_mode;

  PacketCounters total;      // every packet in the system
  PacketCounters lte;        // packets originating at UEs
  PacketCounters background;

  // SLA-marked subset (marking resolved at transmission or UE-side drop)
  std::int64_t sla_packets = 0;
  std::int64_t sla_dropped = 0;
  std::int64_t sla_forwarded = 0;

  double lte_delay_mean_ms = 0.0;
  double lte_delay_p95_ms = 0.0;
  double bg_delay_mean_ms = 0.0;

  std::vector<UeMetrics> ues;
  std::vector<OnuMetrics> onus;
  double olt_revenue = 0.0;
  std::int64_t sla_violation_cycles = 0;  // reservation had to be scaled

  std::int64_t cycles_run = 0;
  std::int64_t tti_ticks = 0;
  std::int64_t la_updates = 0;
  std::int64_t la_pending_created = 0;
  std::int64_t la_pending_resolved = 0;

  std::vector<std::string> audit_failures;  // empty = all invariants held

  double sla_drop_ratio() const {
    return sla_packets > 0 ? static_cast<double>(sla_dropped) / static_cast<double>(sla_packets)
                           : 0.0;
  }
  double onu_profit_total() const {
    double p = 0.0;
    for (const auto& o : onus) p += o.profit();
    return p;
  }
  // ONU share of the money that stayed in the EPON after settlement.
  double onu_profit_share() const {
    const double p = onu_profit_total();
    const double denom = p + olt_revenue;
    return denom > 0.0 ? p / denom : 1.0;
  }
  double mean_converged_payment_per_byte_learning() const;
  bool conservation_ok() const;

  std::string to_json() const;  // deterministic field order, full precision
};

}  // namespace woin
