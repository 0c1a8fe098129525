#include "woin/lte_scheduler.hpp"

#include <stdexcept>

namespace woin {

std::int64_t payment_entry(std::int64_t phi, std::int64_t omega, std::int64_t chi,
                           std::int64_t p, std::int64_t w) {
  if (w < 0) throw std::invalid_argument("payment_entry: w must be >= 0");
  if (p < chi) throw std::invalid_argument("payment_entry: price below base price");
  if (phi >= omega) return p * w;
  if (phi + w <= omega) return chi * w;
  const std::int64_t sla_part = omega - phi;
  return sla_part * chi + (w - sla_part) * p;
}

std::int64_t estimate_drop_risk(const std::deque<Packet>& buffer, std::int64_t sla_budget,
                                Microseconds now, Microseconds tti_us) {
  std::int64_t at_risk = 0;
  std::int64_t budget = sla_budget;
  for (const Packet& pkt : buffer) {
    if (budget >= pkt.size) {
      budget -= pkt.size;
      if (pkt.deadline < now + tti_us) at_risk += pkt.size;
    }
    // packets straddling or past the budget are ASLA; no penalty attaches
  }
  return at_risk;
}

}  // namespace woin
