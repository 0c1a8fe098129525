// eNodeB-side scheduling pieces: payment matrix entries, traffic matrix
// entries, and the drop-risk estimate feeding the dummy-column penalties.
#pragma once

#include <cstdint>
#include <deque>

#include "woin/packet.hpp"
#include "woin/time_types.hpp"

namespace woin {

// Bytes UE i can move on RC j: limited by link quality and by its buffer.
inline std::int64_t traffic_entry(std::int64_t q_ij, std::int64_t beta) {
  return q_ij < beta ? q_ij : beta;
}

// Expected payment for transmitting w bytes, split across the SLA boundary:
// bytes inside the remaining window budget pay chi, the rest pay the learned
// price p.
std::int64_t payment_entry(std::int64_t phi, std::int64_t omega, std::int64_t chi,
                           std::int64_t p, std::int64_t w);

// SLA-marked bytes that expire before the next scheduling opportunity.
// Walks the buffer in FIFO order consuming the SLA byte budget the same way
// transmission marking does; a packet only partially inside the budget
// counts as ASLA.
std::int64_t estimate_drop_risk(const std::deque<Packet>& buffer, std::int64_t sla_budget,
                                Microseconds now, Microseconds tti_us = kTtiUs);

}  // namespace woin
