// ONU-side MAC: the three priority queues with per-packet weight/value,
// report generation, grant-bounded packet selection, deadline drops with
// refunds, and per-(UE, TTI) batch tracking for the learning feedback.
#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "woin/packet.hpp"
#include "woin/time_types.hpp"

namespace woin {

struct QueuedPacket {
  Packet pkt;
  std::int64_t batch_tti = -1;  // -1: no learning feedback attached
};

struct OnuReport {
  std::int64_t r_sla = 0;   // bytes (chunk = 1 byte)
  std::int64_t r_asla = 0;
  std::int64_t bid = 0;     // sum of value_per_byte * size over ASLA packets
};

struct DropRecord {
  Packet pkt;
  std::int64_t refund = 0;  // value_per_byte * size
};

// Delivered/disposed accounting for one (ue, tti) transmission batch.
struct BatchStatus {
  int outstanding = 0;
  std::int64_t forwarded_bytes = 0;
};

class OnuQueues {
 public:
  OnuQueues() = default;
  explicit OnuQueues(std::int64_t capacity_bytes) : capacity_(capacity_bytes) {}

  // Called when a batch becomes fully disposed: (ue, tti, forwarded bytes).
  using BatchCallback = std::function<void(int, std::int64_t, std::int64_t)>;
  void set_batch_callback(BatchCallback cb) { on_batch_done_ = std::move(cb); }

  // Appends to the class queue; packets that do not fit in the remaining
  // buffer are dropped with a refund (and batch bookkeeping).
  void enqueue(const Packet& pkt, std::int64_t batch_tti = -1);

  // Opens feedback tracking for a (ue, tti) batch of `count` packets about
  // to be enqueued. Must precede the enqueues of that batch.
  void open_batch(int ue, std::int64_t tti, int count);

  OnuReport make_report() const;

  // Marks packets for a grant of G bytes: SLA first (oldest first), then
  // greedy over ASLA by value density; nothing is split. Marked packets are
  // removed and returned in transmission order.
  std::vector<QueuedPacket> select_for_transmission(std::int64_t grant_bytes);

  // FIFO variant used by the polling baseline: oldest packets across all
  // queues, stopping at the first that does not fit.
  std::vector<QueuedPacket> select_fifo(std::int64_t grant_bytes);

  // Removes every packet whose deadline is before `now`, refunding each.
  std::vector<DropRecord> drop_expired(Microseconds now);

  // Records end-to-end delivery of previously selected packets.
  void note_forwarded(const QueuedPacket& qp);

  std::int64_t buffered_bytes() const { return buffered_; }
  std::int64_t total_report_bytes() const;  // R_sla + R_asla
  std::size_t packet_count() const;
  // buffered packet counts split by origin: (UE-sourced, background)
  std::pair<std::int64_t, std::int64_t> packets_by_origin() const;

  // income accounting (price-byte units)
  std::int64_t gross_income() const { return gross_income_; }
  std::int64_t refunds() const { return refunds_; }
  std::int64_t overflow_drops() const { return overflow_drops_; }

 private:
  std::deque<QueuedPacket>& queue_of(PacketClass c);
  const std::deque<QueuedPacket>& queue_of(PacketClass c) const;
  void dispose(const QueuedPacket& qp, bool forwarded);
  std::vector<QueuedPacket> take_ids(const std::vector<const QueuedPacket*>& chosen);

  std::deque<QueuedPacket> voice_, video_, data_;
  std::int64_t capacity_ = 10 * 1000 * 1000;
  std::int64_t buffered_ = 0;
  std::int64_t gross_income_ = 0;
  std::int64_t refunds_ = 0;
  std::int64_t overflow_drops_ = 0;
  std::map<std::pair<int, std::int64_t>, BatchStatus> batches_;
  BatchCallback on_batch_done_;
};

// Limited-service polling grant: min(requested, W_max).
inline std::int64_t ipact_grant(std::int64_t requested_bytes, std::int64_t w_max_bytes) {
  return requested_bytes < w_max_bytes ? requested_bytes : w_max_bytes;
}

}  // namespace woin
