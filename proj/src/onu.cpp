#include "woin/onu.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace woin {

namespace {

std::int64_t packet_value(const Packet& p) {
  return p.value_per_byte * static_cast<std::int64_t>(p.size);
}

bool older(const QueuedPacket* a, const QueuedPacket* b) {
  if (a->pkt.gen_time != b->pkt.gen_time) return a->pkt.gen_time < b->pkt.gen_time;
  return a->pkt.id < b->pkt.id;
}

}  // namespace

std::deque<QueuedPacket>& OnuQueues::queue_of(PacketClass c) {
  switch (c) {
    case PacketClass::kVoice: return voice_;
    case PacketClass::kVideo: return video_;
    default: return data_;
  }
}

const std::deque<QueuedPacket>& OnuQueues::queue_of(PacketClass c) const {
  switch (c) {
    case PacketClass::kVoice: return voice_;
    case PacketClass::kVideo: return video_;
    default: return data_;
  }
}

void OnuQueues::open_batch(int ue, std::int64_t tti, int count) {
  if (count <= 0) return;
  const auto key = std::make_pair(ue, tti);
  if (!batches_.emplace(key, BatchStatus{count, 0}).second) {
    throw std::logic_error("OnuQueues: batch opened twice");
  }
}

void OnuQueues::dispose(const QueuedPacket& qp, bool forwarded) {
  if (qp.batch_tti < 0) return;
  const auto it = batches_.find(std::make_pair(qp.pkt.source_ue, qp.batch_tti));
  if (it == batches_.end()) throw std::logic_error("OnuQueues: packet of unknown batch");
  BatchStatus& st = it->second;
  if (forwarded) st.forwarded_bytes += qp.pkt.size;
  if (--st.outstanding == 0) {
    const std::int64_t bytes = st.forwarded_bytes;
    const int ue = qp.pkt.source_ue;
    const std::int64_t tti = qp.batch_tti;
    batches_.erase(it);
    if (on_batch_done_) on_batch_done_(ue, tti, bytes);
  }
}

void OnuQueues::enqueue(const Packet& pkt, std::int64_t batch_tti) {
  QueuedPacket qp{pkt, batch_tti};
  gross_income_ += packet_value(pkt);
  if (buffered_ + pkt.size > capacity_) {
    refunds_ += packet_value(pkt);
    ++overflow_drops_;
    dispose(qp, false);
    return;
  }
  buffered_ += pkt.size;
  queue_of(pkt.pkt_class).push_back(qp);
}

OnuReport OnuQueues::make_report() const {
  OnuReport rep;
  for (const auto* q : {&voice_, &video_, &data_}) {
    for (const QueuedPacket& qp : *q) {
      if (qp.pkt.sla_mark == SlaMark::kSla) {
        rep.r_sla += qp.pkt.size;
      } else {
        rep.r_asla += qp.pkt.size;
        rep.bid += packet_value(qp.pkt);
      }
    }
  }
  return rep;
}

std::int64_t OnuQueues::total_report_bytes() const { return buffered_; }

std::size_t OnuQueues::packet_count() const {
  return voice_.size() + video_.size() + data_.size();
}

std::pair<std::int64_t, std::int64_t> OnuQueues::packets_by_origin() const {
  std::int64_t from_ues = 0, from_bg = 0;
  for (const auto* q : {&voice_, &video_, &data_}) {
    for (const QueuedPacket& qp : *q) {
      (qp.pkt.source_ue >= 0 ? from_ues : from_bg)++;
    }
  }
  return {from_ues, from_bg};
}

std::vector<QueuedPacket> OnuQueues::take_ids(
    const std::vector<const QueuedPacket*>& chosen) {
  std::unordered_set<std::uint64_t> ids;
  ids.reserve(chosen.size() * 2);
  std::vector<QueuedPacket> out;
  out.reserve(chosen.size());
  for (const QueuedPacket* qp : chosen) {
    ids.insert(qp->pkt.id);
    out.push_back(*qp);
    buffered_ -= qp->pkt.size;
  }
  if (ids.empty()) return out;
  for (auto* q : {&voice_, &video_, &data_}) {
    std::deque<QueuedPacket> keep;
    for (QueuedPacket& qp : *q) {
      if (!ids.contains(qp.pkt.id)) keep.push_back(std::move(qp));
    }
    *q = std::move(keep);
  }
  return out;
}

std::vector<QueuedPacket> OnuQueues::select_for_transmission(std::int64_t grant_bytes) {
  std::vector<const QueuedPacket*> sla, asla;
  for (const auto* q : {&voice_, &video_, &data_}) {
    for (const QueuedPacket& qp : *q) {
      (qp.pkt.sla_mark == SlaMark::kSla ? sla : asla).push_back(&qp);
    }
  }
  std::sort(sla.begin(), sla.end(), older);
  // value density is the per-byte price; ties to the older, then smaller id
  std::sort(asla.begin(), asla.end(), [](const QueuedPacket* a, const QueuedPacket* b) {
    if (a->pkt.value_per_byte != b->pkt.value_per_byte) {
      return a->pkt.value_per_byte > b->pkt.value_per_byte;
    }
    return older(a, b);
  });

  std::int64_t budget = grant_bytes;
  std::vector<const QueuedPacket*> chosen;
  for (const auto* bucket : {&sla, &asla}) {
    for (const QueuedPacket* qp : *bucket) {
      if (qp->pkt.size <= budget) {
        chosen.push_back(qp);
        budget -= qp->pkt.size;
      }
    }
  }
  return take_ids(chosen);
}

std::vector<QueuedPacket> OnuQueues::select_fifo(std::int64_t grant_bytes) {
  std::vector<const QueuedPacket*> all;
  for (const auto* q : {&voice_, &video_, &data_}) {
    for (const QueuedPacket& qp : *q) all.push_back(&qp);
  }
  std::sort(all.begin(), all.end(), older);

  std::int64_t budget = grant_bytes;
  std::vector<const QueuedPacket*> chosen;
  for (const QueuedPacket* qp : all) {
    if (qp->pkt.size > budget) break;  // strict FIFO: head-of-line blocks
    chosen.push_back(qp);
    budget -= qp->pkt.size;
  }
  return take_ids(chosen);
}

std::vector<DropRecord> OnuQueues::drop_expired(Microseconds now) {
  std::vector<DropRecord> dropped;
  for (auto* q : {&voice_, &video_, &data_}) {
    std::deque<QueuedPacket> keep;
    for (QueuedPacket& qp : *q) {
      if (qp.pkt.deadline < now) {
        const std::int64_t refund = packet_value(qp.pkt);
        refunds_ += refund;
        buffered_ -= qp.pkt.size;
        dropped.push_back({qp.pkt, refund});
        dispose(qp, false);
      } else {
        keep.push_back(std::move(qp));
      }
    }
    *q = std::move(keep);
  }
  return dropped;
}

void OnuQueues::note_forwarded(const QueuedPacket& qp) { dispose(qp, true); }

}  // namespace woin
