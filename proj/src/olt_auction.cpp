#include "woin/olt_auction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace woin {

SlaReservation reserve_sla(const std::vector<OnuReport>& reports, std::int64_t capacity) {
  if (capacity <= 0) throw std::invalid_argument("reserve_sla: capacity must be > 0");
  SlaReservation res;
  res.sla_grant.assign(reports.size(), 0);
  std::int64_t demand = 0;
  for (const OnuReport& r : reports) demand += r.r_sla;
  if (demand <= capacity) {
    for (std::size_t n = 0; n < reports.size(); ++n) res.sla_grant[n] = reports[n].r_sla;
    res.residual = capacity - demand;
    return res;
  }
  // oversubscribed: scale proportionally, flag the violation
  res.oversubscribed = true;
  std::int64_t given = 0;
  for (std::size_t n = 0; n < reports.size(); ++n) {
    res.sla_grant[n] = reports[n].r_sla * capacity / demand;  // floor
    given += res.sla_grant[n];
  }
  res.residual = 0;
  (void)given;  // sub-byte floor residue (< Phi bytes) is discarded
  return res;
}

AllocationPlan allocate(const std::vector<OnuReport>& reports, std::int64_t residual) {
  if (residual < 0) throw std::invalid_argument("allocate: negative capacity");
  AllocationPlan plan;
  plan.asla_grant.assign(reports.size(), 0);
  plan.alpha.assign(reports.size(), 0.0);

  std::vector<std::size_t> order;
  for (std::size_t n = 0; n < reports.size(); ++n) {
    if (reports[n].r_asla > 0) {
      order.push_back(n);
    } else if (reports[n].bid > 0) {
      throw std::invalid_argument("allocate: positive bid with zero ASLA requirement");
    }
  }
  // decreasing bid rate v/R; ties to the lower ONU index
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ra = static_cast<double>(reports[a].bid) / static_cast<double>(reports[a].r_asla);
    const double rb = static_cast<double>(reports[b].bid) / static_cast<double>(reports[b].r_asla);
    if (ra != rb) return ra > rb;
    return a < b;
  });

  std::int64_t left = residual;
  for (std::size_t n : order) {
    if (left <= 0) break;
    const std::int64_t want = reports[n].r_asla;
    const std::int64_t got = std::min(want, left);
    plan.asla_grant[n] = got;
    plan.alpha[n] = static_cast<double>(got) / static_cast<double>(want);
    left -= got;
    plan.total_value += static_cast<double>(reports[n].bid) / static_cast<double>(want) *
                        static_cast<double>(got);
  }
  return plan;
}

PaymentLedger vcg_settle(const std::vector<OnuReport>& reports, std::int64_t residual,
                         const AllocationPlan& plan) {
  PaymentLedger ledger;
  ledger.discount.assign(reports.size(), 0.0);
  ledger.payment.assign(reports.size(), 0.0);
  for (std::size_t n = 0; n < reports.size(); ++n) {
    if (plan.asla_grant[n] <= 0) continue;
    // optimal value with n absent, at unchanged residual capacity
    std::vector<OnuReport> without = reports;
    without[n] = OnuReport{};
    const AllocationPlan restricted = allocate(without, residual);
    const double tau = plan.total_value - restricted.total_value;
    const double rate =
        static_cast<double>(reports[n].bid) / static_cast<double>(reports[n].r_asla);
    ledger.discount[n] = tau;
    ledger.payment[n] = rate * static_cast<double>(plan.asla_grant[n]) - tau;
    ledger.olt_revenue += ledger.payment[n];
  }
  return ledger;
}

std::vector<Grant> schedule_cycle(const std::vector<std::int64_t>& sla_bytes,
                                  const std::vector<std::int64_t>& asla_bytes,
                                  const std::vector<Microseconds>& prop_delay_us,
                                  Microseconds cycle_start, Microseconds guard_us,
                                  Microseconds max_cycle_us, double link_rate_bps,
                                  int report_bytes) {
  if (sla_bytes.size() != prop_delay_us.size() || asla_bytes.size() != prop_delay_us.size()) {
    throw std::invalid_argument("schedule_cycle: grant/propagation size mismatch");
  }
  const std::size_t n = sla_bytes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // nearest ONU first; ties by index
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (prop_delay_us[a] != prop_delay_us[b]) return prop_delay_us[a] < prop_delay_us[b];
    return a < b;
  });

  const Microseconds report_us = tx_duration_us(report_bytes, link_rate_bps);
  std::vector<Grant> out;
  out.reserve(n);
  Microseconds cursor = cycle_start;
  bool first = true;
  for (std::size_t idx : order) {
    Grant g;
    g.onu = static_cast<int>(idx);
    g.sla_bytes = sla_bytes[idx];
    g.asla_bytes = asla_bytes[idx];
    // a slot cannot arrive before the gate reaches the ONU and its burst
    // travels back; consecutive slots are separated by the guard
    const Microseconds earliest = cycle_start + prop_delay_us[idx];
    g.start_us = first ? std::max(cursor, earliest) : std::max(cursor + guard_us, earliest);
    g.report_end_us = g.start_us + report_us;
    g.data_end_us = g.report_end_us + tx_duration_us(g.total_bytes(), link_rate_bps);
    cursor = g.data_end_us;
    first = false;
    out.push_back(g);
  }
  if (cursor > cycle_start + max_cycle_us) {
    throw std::logic_error("schedule_cycle: plan exceeds max cycle length");
  }
  // back to ONU index order for the caller
  std::sort(out.begin(), out.end(), [](const Grant& a, const Grant& b) { return a.onu < b.onu; });
  return out;
}

std::int64_t cycle_capacity_bytes(int onu_count, Microseconds max_cycle_us,
                                  Microseconds guard_us, Microseconds max_prop_us,
                                  double link_rate_bps, int report_bytes) {
  const Microseconds report_us = tx_duration_us(report_bytes, link_rate_bps);
  // +1 us per slot absorbs the per-slot ceil of the data duration
  const Microseconds overhead =
      static_cast<Microseconds>(onu_count) * (guard_us + report_us + 1) + max_prop_us;
  const Microseconds usable = max_cycle_us - overhead;
  if (usable <= 0) return 0;
  return static_cast<std::int64_t>(static_cast<double>(usable) * link_rate_bps / 8e6);
}

}  // namespace woin
