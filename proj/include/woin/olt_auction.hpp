// OLT-side DBA: SLA reservation, fractional-knapsack allocation of the
// residual capacity, VCG discounts and payments, and cycle slot layout.
#pragma once

#include <cstdint>
#include <vector>

#include "woin/onu.hpp"
#include "woin/time_types.hpp"

namespace woin {

struct BidSet {
  std::vector<OnuReport> reports;  // indexed by ONU
  std::int64_t capacity_bytes = 0;
};

struct SlaReservation {
  std::vector<std::int64_t> sla_grant;
  std::int64_t residual = 0;
  bool oversubscribed = false;  // proportional scaling was applied
};

struct AllocationPlan {
  std::vector<std::int64_t> asla_grant;  // varpi_n, bytes
  std::vector<double> alpha;             // granted fraction of R_asla
  double total_value = 0.0;              // wp(k) = sum over n of rate_n * varpi_n
};

struct PaymentLedger {
  std::vector<double> discount;  // tau_n
  std::vector<double> payment;   // H_n
  double olt_revenue = 0.0;      // sum of H_n
};

struct Grant {
  int onu = -1;
  Microseconds start_us = 0;       // upstream arrival time of the slot head
  Microseconds report_end_us = 0;
  Microseconds data_end_us = 0;
  std::int64_t sla_bytes = 0;
  std::int64_t asla_bytes = 0;
  std::int64_t total_bytes() const { return sla_bytes + asla_bytes; }
};

// Full SLA grants when they fit; otherwise proportional scaling and a raised
// oversubscribed flag.
SlaReservation reserve_sla(const std::vector<OnuReport>& reports, std::int64_t capacity);

// Fractional knapsack over residual capacity: ONUs in decreasing bid-rate
// order (v/R_asla), ties to the lower index; at most one partial grant.
// Reports with R_asla = 0 are skipped; a positive bid on a zero requirement
// is rejected.
AllocationPlan allocate(const std::vector<OnuReport>& reports, std::int64_t residual);

// VCG settlement: discount tau_n = wp(k*) - wp(k* without n) at unchanged
// capacity, payment H_n = rate_n * varpi_n - tau_n.
PaymentLedger vcg_settle(const std::vector<OnuReport>& reports, std::int64_t residual,
                         const AllocationPlan& plan);

// Lays out one cycle's slots in upstream arrival time starting at
// cycle_start: ONUs in ascending propagation-delay order, report at the head
// of each slot, consecutive slots separated by the guard. Throws if the
// layout exceeds max_cycle. Returned grants are in ONU index order.
std::vector<Grant> schedule_cycle(const std::vector<std::int64_t>& sla_bytes,
                                  const std::vector<std::int64_t>& asla_bytes,
                                  const std::vector<Microseconds>& prop_delay_us,
                                  Microseconds cycle_start, Microseconds guard_us,
                                  Microseconds max_cycle_us, double link_rate_bps,
                                  int report_bytes);

// Usable data bytes per cycle after guard, report, and propagation margins.
std::int64_t cycle_capacity_bytes(int onu_count, Microseconds max_cycle_us,
                                  Microseconds guard_us, Microseconds max_prop_us,
                                  double link_rate_bps, int report_bytes);

}  // namespace woin
