// Discrete-event core: the event record and the run-wide priority queue.
#pragma once

#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "woin/time_types.hpp"

namespace woin {

// Equal-time ordering is by kind first (generation precedes the TTI that may
// schedule it; upstream arrivals complete before the next cycle starts), then
// by insertion sequence.
enum class EventKind : int {
  PACKET_GEN = 0,
  TTI_TICK = 1,
  REPORT_ARRIVAL = 2,
  GRANT_ARRIVAL = 3,
  DATA_ARRIVAL = 4,
  CYCLE_START = 5,
};

struct SimEvent {
  Microseconds time = 0;
  std::uint64_t seq = 0;  // assigned by the queue, unique per run
  EventKind kind = EventKind::TTI_TICK;
  int target = 0;  // entity id: ONU/cell index, or -1 for the OLT
};

class EventQueue {
 public:
  // Rejects events scheduled in the past relative to the last popped time.
  void schedule(Microseconds time, EventKind kind, int target) {
    if (time < clock_) {
      throw std::logic_error("EventQueue: event scheduled in the past");
    }
    heap_.push(SimEvent{time, next_seq_++, kind, target});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  Microseconds clock() const { return clock_; }
  Microseconds peek_time() const { return heap_.top().time; }

  SimEvent pop_next() {
    SimEvent ev = heap_.top();
    heap_.pop();
    clock_ = ev.time;
    return ev;
  }

 private:
  struct Later {
    bool operator()(const SimEvent& a, const SimEvent& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
      return a.seq > b.seq;
    }
  };

  std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
  std::uint64_t next_seq_ = 0;
  Microseconds clock_ = 0;
};

}  // namespace woin
