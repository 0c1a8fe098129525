#include "woin/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "woin/assignment.hpp"
#include "woin/event_queue.hpp"
#include "woin/learning_automaton.hpp"
#include "woin/lte_scheduler.hpp"
#include "woin/olt_auction.hpp"
#include "woin/onu.hpp"
#include "woin/radio.hpp"
#include "woin/sla_tracker.hpp"
#include "woin/traffic.hpp"

namespace woin {

namespace {

constexpr int kOltTarget = -1;

struct UeState {
  int id = 0;
  bool learning = false;
  VoipSource source;
  SlaTracker tracker;
  std::deque<Packet> buffer;
  std::int64_t buffered_bytes = 0;
  LearningAutomaton la;
  std::map<std::int64_t, PendingFeedback> pendings;  // keyed by TTI index
  std::vector<std::int64_t> immediate_due;           // resolved at the next tick
  UeMetrics metrics;
};

struct OnuState {
  int id = 0;
  Microseconds prop_us = 0;
  OnuQueues queues;
  BackgroundSource bg;
  bool has_bg = false;
  OnuReport snapshot;           // taken at cycle start, sent at the slot head
  std::int64_t snapshot_total = 0;
  Grant grant;
  bool has_grant = false;
  OnuMetrics metrics;
};

// An upstream burst on its way to the OLT, with per-packet arrival times.
struct UpstreamBurst {
  int onu = 0;
  std::vector<QueuedPacket> packets;
  std::vector<Microseconds> arrival_us;
};

// One UE's TTI batch on its way to the cell's ONU.
struct CellDelivery {
  Microseconds due = 0;
  int ue = 0;
  std::int64_t tti = 0;
  std::vector<Packet> packets;
};

class Engine {
 public:
  explicit Engine(const RunConfig& cfg) : cfg_(cfg) {}
  RunMetrics run();

 private:
  void setup();
  void on_packet_gen(const SimEvent& ev);
  void on_tti_tick(const SimEvent& ev);
  void on_cycle_start(const SimEvent& ev);
  void on_grant_arrival(const SimEvent& ev);
  void on_data_arrival(const SimEvent& ev);
  void on_report_arrival(const SimEvent& ev);

  void generate_ue_traffic(Microseconds now);
  void drop_expired_ue(UeState& ue, Microseconds now);
  void resolve_pending(UeState& ue, std::int64_t tti, std::int64_t delivered);
  void batch_done(int ue, std::int64_t tti, std::int64_t forwarded);
  void finish_residuals();
  void finalize_metrics();
  void audit(const std::string& what, bool ok);

  PacketCounters& origin_counters(int source_ue) {
    return source_ue >= 0 ? metrics_.lte : metrics_.background;
  }

  RunConfig cfg_;
  RunMetrics metrics_;
  EventQueue queue_;
  Microseconds end_us_ = 0;
  Microseconds converged_from_us_ = 0;

  RngStream rng_prop_, rng_shadow_, rng_place_, rng_fading_, rng_la_;
  std::vector<RngStream> rng_voip_, rng_bg_;

  std::vector<UeState> ues_;
  std::unique_ptr<RadioModel> radio_;
  std::vector<OnuState> onus_;
  std::vector<OnuReport> olt_reports_;
  std::deque<CellDelivery> deliveries_;   // cell -> ONU 0, due-ordered
  std::deque<UpstreamBurst> olt_inbound_; // ONUs -> OLT, arrival-ordered
  std::int64_t cycle_capacity_ = 0;
  std::int64_t ipact_wmax_ = 0;
  std::uint64_t next_packet_id_ = 1;
  std::vector<Microseconds> lte_delays_, bg_delays_;

  std::ofstream la_trace_, auction_trace_;
};

void Engine::audit(const std::string& what, bool ok) {
  if (!ok && metrics_.audit_failures.size() < 100) metrics_.audit_failures.push_back(what);
}

void Engine::setup() {
  const auto problems = cfg_.validate();
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::invalid_argument(msg);
  }

  end_us_ = seconds_to_us(cfg_.sim_duration_s);
  converged_from_us_ = end_us_ / 2;
  metrics_.seed = cfg_.seed;
  metrics_.sim_duration_s = cfg_.sim_duration_s;
  metrics_.scheduler_mode = to_string(cfg_.scheduler_mode);

  rng_prop_ = RngStream(cfg_.seed, "prop");
  rng_shadow_ = RngStream(cfg_.seed, "shadow");
  rng_place_ = RngStream(cfg_.seed, "placement");
  rng_fading_ = RngStream(cfg_.seed, "fading");
  rng_la_ = RngStream(cfg_.seed, "la");

  // UEs of the LTE cell on ONU 0
  std::vector<UeGroupConfig> instantiated;
  if (cfg_.cell.use_ppp && !cfg_.cell.groups.empty()) {
    const auto drawn =
        place_ues(&rng_place_, cfg_.cell.ppp_intensity_per_km2, cfg_.cell.cell_radius_m);
    UeGroupConfig tmpl = cfg_.cell.groups.front();
    tmpl.count = static_cast<int>(drawn.size());
    instantiated.push_back(tmpl);
  } else {
    instantiated = cfg_.cell.groups;
  }
  int total_ues = 0;
  for (const auto& g : instantiated) total_ues += g.count;
  const auto positions = place_ues_fixed(&rng_place_, total_ues, cfg_.cell.cell_radius_m,
                                         cfg_.cell.min_ue_distance_m);

  const int action_count = static_cast<int>(cfg_.sched.price_levels.size());
  rng_voip_.reserve(static_cast<std::size_t>(total_ues));
  int ue_id = 0;
  for (const auto& g : instantiated) {
    for (int k = 0; k < g.count; ++k) {
      UeState ue;
      ue.id = ue_id;
      ue.learning = g.learning && cfg_.scheduler_mode == SchedulerMode::AUORA_LASA;
      ue.tracker = SlaTracker(static_cast<std::int64_t>(g.sla_rate_bytes_per_s / 1000.0),
                              cfg_.sched.window_ttis);
      ue.la = LearningAutomaton(cfg_.sched.buffer_state_count, action_count,
                                cfg_.la.raw_negative_penalty_spread);
      ue.metrics.ue = ue_id;
      ue.metrics.learning = ue.learning;
      ues_.push_back(std::move(ue));
      rng_voip_.emplace_back(cfg_.seed, "voip/ue" + std::to_string(ue_id));
      ++ue_id;
    }
  }
  {
    int idx = 0;
    for (const auto& g : instantiated) {
      for (int k = 0; k < g.count; ++k, ++idx) {
        ues_[static_cast<std::size_t>(idx)].source =
            VoipSource(g, &rng_voip_[static_cast<std::size_t>(idx)], 0);
      }
    }
  }
  radio_ = std::make_unique<RadioModel>(cfg_.radio, positions, &rng_shadow_);

  onus_.resize(static_cast<std::size_t>(cfg_.onu_count));
  olt_reports_.resize(static_cast<std::size_t>(cfg_.onu_count));
  rng_bg_.reserve(static_cast<std::size_t>(cfg_.onu_count));
  for (int n = 0; n < cfg_.onu_count; ++n) {
    rng_bg_.emplace_back(cfg_.seed, "bg/onu" + std::to_string(n));
  }
  for (int n = 0; n < cfg_.onu_count; ++n) {
    OnuState& onu = onus_[static_cast<std::size_t>(n)];
    onu.id = n;
    onu.prop_us = rng_prop_.uniform_int(cfg_.prop_delay_min_us, cfg_.prop_delay_max_us);
    onu.queues = OnuQueues(10LL * 1000 * 1000);  // 10 MB
    onu.queues.set_batch_callback(
        [this](int ue, std::int64_t tti, std::int64_t fwd) { batch_done(ue, tti, fwd); });
    onu.metrics.onu = n;
    const int bg_index = n - 1;
    if (bg_index >= 0 && bg_index < static_cast<int>(cfg_.background.size())) {
      onu.bg = BackgroundSource(cfg_.background[static_cast<std::size_t>(bg_index)],
                                &rng_bg_[static_cast<std::size_t>(n)]);
      onu.has_bg = true;
    }
  }

  cycle_capacity_ = cycle_capacity_bytes(cfg_.onu_count, cfg_.max_cycle_us, cfg_.guard_us,
                                         cfg_.prop_delay_max_us, cfg_.link_rate_bps,
                                         cfg_.report_bytes);
  if (cycle_capacity_ <= 0) {
    throw std::invalid_argument(
        "invalid config:\n  max_cycle_us: no usable capacity after overheads");
  }
  ipact_wmax_ = cycle_capacity_ / cfg_.onu_count;

  if (!cfg_.trace.la_trace_path.empty()) {
    la_trace_.open(cfg_.trace.la_trace_path);
    if (!la_trace_) throw std::runtime_error("cannot open " + cfg_.trace.la_trace_path);
    la_trace_ << "tti,ue,state,action";
    for (std::size_t a = 0; a < cfg_.sched.price_levels.size(); ++a) la_trace_ << ",p" << a;
    la_trace_ << "\n";
  }
  if (!cfg_.trace.auction_trace_path.empty()) {
    auction_trace_.open(cfg_.trace.auction_trace_path);
    if (!auction_trace_) throw std::runtime_error("cannot open " + cfg_.trace.auction_trace_path);
    auction_trace_ << "cycle,onu,r_sla,r_asla,bid,sla_grant,asla_grant,discount,payment\n";
  }
}

void Engine::generate_ue_traffic(Microseconds now) {
  for (std::size_t i = 0; i < ues_.size(); ++i) {
    UeState& ue = ues_[i];
    auto pkts = ue.source.step(now, kTtiUs);
    for (Packet& p : pkts) {
      p.id = next_packet_id_++;
      p.source_ue = ue.id;
      p.deadline = p.gen_time + cfg_.packet_deadline_us(p.pkt_class);
      metrics_.total.generated_packets++;
      metrics_.total.generated_bytes += p.size;
      metrics_.lte.generated_packets++;
      metrics_.lte.generated_bytes += p.size;
      ue.metrics.generated_packets++;
      if (ue.buffered_bytes + p.size > cfg_.sched.ue_buffer_bytes) {
        metrics_.total.dropped_ue_overflow++;
        metrics_.lte.dropped_ue_overflow++;
        continue;  // newest dropped, never classified
      }
      ue.buffer.push_back(p);
      ue.buffered_bytes += p.size;
    }
  }
}

void Engine::drop_expired_ue(UeState& ue, Microseconds now) {
  // positional SLA marking against the window budget, as transmission uses
  std::int64_t budget = ue.tracker.sla_budget();
  std::deque<Packet> keep;
  for (const Packet& p : ue.buffer) {
    bool is_sla = false;
    if (budget >= p.size) {
      budget -= p.size;
      is_sla = true;
    }
    if (p.deadline < now) {
      ue.buffered_bytes -= p.size;
      metrics_.total.dropped_lte_deadline++;
      metrics_.lte.dropped_lte_deadline++;
      if (is_sla) {
        metrics_.sla_packets++;
        metrics_.sla_dropped++;
      }
    } else {
      keep.push_back(p);
    }
  }
  ue.buffer = std::move(keep);
}

void Engine::resolve_pending(UeState& ue, std::int64_t tti, std::int64_t delivered) {
  const auto it = ue.pendings.find(tti);
  if (it == ue.pendings.end()) {
    throw std::logic_error("resolve: pending missing or resolved twice");
  }
  const PendingFeedback pending = it->second;
  ue.pendings.erase(it);
  ue.la.resolve(pending, delivered, cfg_.price_bar());
  metrics_.la_updates++;
  metrics_.la_pending_resolved++;
  const auto& probs = ue.la.probs(pending.state);
  double sum = 0.0;
  bool in_range = true;
  for (double p : probs) {
    sum += p;
    in_range = in_range && p >= -1e-12 && p <= 1.0 + 1e-12;
  }
  audit("la probability vector out of range after update",
        std::abs(sum - 1.0) <= 1e-9 && in_range);
}

void Engine::batch_done(int ue_id, std::int64_t tti, std::int64_t forwarded) {
  UeState& ue = ues_[static_cast<std::size_t>(ue_id)];
  const auto it = ue.pendings.find(tti);
  if (it == ue.pendings.end()) return;  // no ASLA decision rode this batch
  if (!it->second.deferred) return;     // immediate path owns it
  resolve_pending(ue, tti, forwarded);
}

void Engine::on_packet_gen(const SimEvent& ev) {
  if (ev.target == 0) {
    generate_ue_traffic(ev.time);
    return;
  }
  OnuState& onu = onus_[static_cast<std::size_t>(ev.target)];
  auto pkts = onu.bg.step(ev.time, cfg_.max_cycle_us, cfg_.sched.base_price);
  for (Packet& p : pkts) {
    p.id = next_packet_id_++;
    p.deadline = p.gen_time + cfg_.packet_deadline_us(p.pkt_class);
    metrics_.total.generated_packets++;
    metrics_.total.generated_bytes += p.size;
    metrics_.background.generated_packets++;
    metrics_.background.generated_bytes += p.size;
    if (p.sla_mark == SlaMark::kSla) metrics_.sla_packets++;
    const std::int64_t overflow_before = onu.queues.overflow_drops();
    onu.queues.enqueue(p);
    if (onu.queues.overflow_drops() > overflow_before) {
      metrics_.total.dropped_onu_overflow++;
      metrics_.background.dropped_onu_overflow++;
      if (p.sla_mark == SlaMark::kSla) metrics_.sla_dropped++;
    }
  }
}

void Engine::on_tti_tick(const SimEvent& ev) {
  const Microseconds now = ev.time;
  const std::int64_t tti = now / kTtiUs;
  metrics_.tti_ticks++;

  for (UeState& ue : ues_) {
    for (std::int64_t due : ue.immediate_due) resolve_pending(ue, due, /*delivered=*/0);
    ue.immediate_due.clear();
    drop_expired_ue(ue, now);
  }

  if (!ues_.empty()) {
    const LinkState links = radio_->refresh_links(&rng_fading_);
    const int n_ues = static_cast<int>(ues_.size());
    const int n_rcs = cfg_.radio.rc_count;
    const bool priced = cfg_.scheduler_mode == SchedulerMode::AUORA_LASA;

    std::vector<std::int64_t> price(static_cast<std::size_t>(n_ues), cfg_.sched.base_price);
    std::vector<int> state(static_cast<std::size_t>(n_ues), 0);
    std::vector<int> action(static_cast<std::size_t>(n_ues), -1);
    std::vector<Classification> split(static_cast<std::size_t>(n_ues));
    std::vector<std::vector<std::int64_t>> payments(
        static_cast<std::size_t>(n_ues),
        std::vector<std::int64_t>(static_cast<std::size_t>(n_rcs), 0));
    std::vector<std::int64_t> risk(static_cast<std::size_t>(n_ues), 0);

    for (int i = 0; i < n_ues; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      UeState& ue = ues_[ui];
      split[ui] = ue.tracker.classify(ue.buffered_bytes);
      if (split[ui].asla_bytes > 0) {
        state[ui] = buffer_state(split[ui].asla_bytes, cfg_.sched.ue_buffer_bytes,
                                 cfg_.sched.buffer_state_count);
        if (ue.learning) {
          action[ui] = ue.la.pick_action(state[ui], &rng_la_);
          price[ui] = cfg_.sched.price_levels[static_cast<std::size_t>(action[ui])] *
                      cfg_.sched.base_price;
        }
      }
      risk[ui] = estimate_drop_risk(ue.buffer, ue.tracker.sla_budget(), now);
      for (int j = 0; j < n_rcs; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const std::int64_t w = traffic_entry(links.q[ui][uj], ue.buffered_bytes);
        payments[ui][uj] = priced ? payment_entry(ue.tracker.phi(), ue.tracker.omega(),
                                                  cfg_.sched.base_price, price[ui], w)
                                  : w;
      }
    }

    const AssignmentProblem problem = build_assignment(payments, risk, cfg_.price_bar());
    const AssignmentSolution solution = solve_assignment(problem);

    for (int i = 0; i < n_ues; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      UeState& ue = ues_[ui];
      std::int64_t t_sla = 0, t_total = 0;
      std::vector<Packet> batch;
      const int col = solution.column_of_row[ui];
      if (col < problem.real_columns) {
        std::int64_t budget =
            traffic_entry(links.q[ui][static_cast<std::size_t>(col)], ue.buffered_bytes);
        std::int64_t sla_budget = ue.tracker.sla_budget();
        // whole packets in FIFO order; the head blocks when it does not fit
        while (!ue.buffer.empty() && ue.buffer.front().size <= budget) {
          Packet p = ue.buffer.front();
          ue.buffer.pop_front();
          ue.buffered_bytes -= p.size;
          budget -= p.size;
          if (sla_budget >= p.size) {
            sla_budget -= p.size;
            p.sla_mark = SlaMark::kSla;
            p.value_per_byte = cfg_.sched.base_price;
            t_sla += p.size;
            metrics_.sla_packets++;
          } else {
            p.sla_mark = SlaMark::kAsla;
            p.value_per_byte = price[ui];
          }
          t_total += p.size;
          ue.metrics.paid_total += p.value_per_byte * p.size;
          ue.metrics.bytes_total += p.size;
          if (p.sla_mark == SlaMark::kAsla && now >= converged_from_us_) {
            ue.metrics.converged_asla_paid += p.value_per_byte * p.size;
            ue.metrics.converged_asla_bytes += p.size;
          }
          batch.push_back(p);
        }
      }
      ue.tracker.advance_window(t_sla);

      if (!batch.empty()) {
        deliveries_.push_back({now + kTtiUs, ue.id, tti, std::move(batch)});
      }
      // one decision per TTI where ASLA demand existed; the resolution path
      // depends on whether ASLA bytes actually left this TTI
      if (ue.learning && split[ui].asla_bytes > 0) {
        PendingFeedback pending;
        pending.ue = ue.id;
        pending.tti = tti;
        pending.state = state[ui];
        pending.action = action[ui];
        pending.beta_sla = split[ui].sla_bytes;
        pending.beta_asla = split[ui].asla_bytes;
        pending.price = price[ui];
        pending.deferred = (t_total - t_sla) > 0;
        ue.pendings.emplace(tti, pending);
        metrics_.la_pending_created++;
        if (!pending.deferred) {
          ue.immediate_due.push_back(tti);
        }
        if (la_trace_.is_open()) {
          la_trace_ << tti << ',' << ue.id << ',' << pending.state << ',' << pending.action;
          for (double p : ue.la.probs(pending.state)) la_trace_ << ',' << p;
          la_trace_ << "\n";
        }
      }
    }

    if (!deliveries_.empty() && deliveries_.back().due == now + kTtiUs) {
      queue_.schedule(now + kTtiUs, EventKind::DATA_ARRIVAL, 0);
    }
  }

  if (now + kTtiUs <= end_us_) {
    queue_.schedule(now + kTtiUs, EventKind::PACKET_GEN, 0);
    queue_.schedule(now + kTtiUs, EventKind::TTI_TICK, 0);
  }
}

void Engine::on_cycle_start(const SimEvent& ev) {
  const Microseconds now = ev.time;
  metrics_.cycles_run++;
  const std::int64_t cycle = now / cfg_.max_cycle_us;

  const std::size_t n = onus_.size();
  std::vector<std::int64_t> sla_grant(n, 0), asla_grant(n, 0);

  if (cfg_.scheduler_mode == SchedulerMode::IPACT) {
    for (std::size_t i = 0; i < n; ++i) {
      asla_grant[i] = ipact_grant(olt_reports_[i].r_asla, ipact_wmax_);
    }
  } else {
    const SlaReservation res = reserve_sla(olt_reports_, cycle_capacity_);
    if (res.oversubscribed) metrics_.sla_violation_cycles++;
    const AllocationPlan plan = allocate(olt_reports_, res.residual);
    const PaymentLedger ledger = vcg_settle(olt_reports_, res.residual, plan);
    for (std::size_t i = 0; i < n; ++i) {
      sla_grant[i] = res.sla_grant[i];
      asla_grant[i] = plan.asla_grant[i];
      onus_[i].metrics.vcg_paid += ledger.payment[i];
      audit("vcg discount negative", ledger.discount[i] >= -1e-9);
      audit("vcg payment below zero", ledger.payment[i] >= -1e-9);
      if (auction_trace_.is_open() &&
          (olt_reports_[i].r_sla > 0 || olt_reports_[i].r_asla > 0)) {
        auction_trace_ << cycle << ',' << i << ',' << olt_reports_[i].r_sla << ','
                       << olt_reports_[i].r_asla << ',' << olt_reports_[i].bid << ','
                       << sla_grant[i] << ',' << asla_grant[i] << ',' << ledger.discount[i]
                       << ',' << ledger.payment[i] << "\n";
      }
    }
    metrics_.olt_revenue += ledger.olt_revenue;
  }

  std::vector<Microseconds> props(n, 0);
  for (std::size_t i = 0; i < n; ++i) props[i] = onus_[i].prop_us;
  std::vector<Grant> grants;
  try {
    grants = schedule_cycle(sla_grant, asla_grant, props, now, cfg_.guard_us,
                            cfg_.max_cycle_us, cfg_.link_rate_bps, cfg_.report_bytes);
  } catch (const std::logic_error& e) {
    audit(std::string("cycle layout infeasible: ") + e.what(), false);
  }

  for (const Grant& g : grants) {
    OnuState& onu = onus_[static_cast<std::size_t>(g.onu)];
    onu.snapshot = onu.queues.make_report();
    onu.snapshot_total = onu.queues.total_report_bytes();
    onu.grant = g;
    onu.has_grant = true;
    queue_.schedule(g.start_us - onu.prop_us, EventKind::GRANT_ARRIVAL, onu.id);
  }

  if (now + cfg_.max_cycle_us <= end_us_) {
    for (const OnuState& onu : onus_) {
      if (onu.has_bg) queue_.schedule(now + cfg_.max_cycle_us, EventKind::PACKET_GEN, onu.id);
    }
    queue_.schedule(now + cfg_.max_cycle_us, EventKind::CYCLE_START, kOltTarget);
  }
}

void Engine::on_grant_arrival(const SimEvent& ev) {
  OnuState& onu = onus_[static_cast<std::size_t>(ev.target)];
  if (!onu.has_grant) throw std::logic_error("grant arrival without a grant");
  onu.has_grant = false;
  const Grant g = onu.grant;

  const auto dropped = onu.queues.drop_expired(ev.time);
  for (const DropRecord& d : dropped) {
    metrics_.total.dropped_onu_deadline++;
    origin_counters(d.pkt.source_ue).dropped_onu_deadline++;
    if (d.pkt.sla_mark == SlaMark::kSla) metrics_.sla_dropped++;
  }

  std::vector<QueuedPacket> burst;
  if (cfg_.scheduler_mode == SchedulerMode::IPACT) {
    burst = onu.queues.select_fifo(g.total_bytes());
  } else {
    burst = onu.queues.select_for_transmission(g.total_bytes());
  }

  // the report heads the slot; data packets arrive back to back behind it
  queue_.schedule(g.report_end_us, EventKind::REPORT_ARRIVAL, onu.id);
  if (!burst.empty()) {
    UpstreamBurst flight;
    flight.onu = onu.id;
    Microseconds cursor = g.report_end_us;
    for (const QueuedPacket& qp : burst) {
      cursor += tx_duration_us(qp.pkt.size, cfg_.link_rate_bps);
      flight.arrival_us.push_back(cursor);
      flight.packets.push_back(qp);
    }
    olt_inbound_.push_back(std::move(flight));
    queue_.schedule(cursor, EventKind::DATA_ARRIVAL, kOltTarget);
  }
}

void Engine::on_report_arrival(const SimEvent& ev) {
  OnuState& onu = onus_[static_cast<std::size_t>(ev.target)];
  if (cfg_.scheduler_mode == SchedulerMode::IPACT) {
    // the polling baseline reports a single queue total
    OnuReport rep;
    rep.r_asla = onu.snapshot_total;
    olt_reports_[static_cast<std::size_t>(ev.target)] = rep;
  } else {
    olt_reports_[static_cast<std::size_t>(ev.target)] = onu.snapshot;
  }
}

void Engine::on_data_arrival(const SimEvent& ev) {
  if (ev.target == kOltTarget) {
    if (olt_inbound_.empty()) throw std::logic_error("OLT data arrival without a burst");
    UpstreamBurst flight = std::move(olt_inbound_.front());
    olt_inbound_.pop_front();
    OnuState& onu = onus_[static_cast<std::size_t>(flight.onu)];
    for (std::size_t k = 0; k < flight.packets.size(); ++k) {
      const QueuedPacket& qp = flight.packets[k];
      const Microseconds delay = flight.arrival_us[k] - qp.pkt.gen_time;
      metrics_.total.forwarded_packets++;
      metrics_.total.forwarded_bytes += qp.pkt.size;
      PacketCounters& oc = origin_counters(qp.pkt.source_ue);
      oc.forwarded_packets++;
      oc.forwarded_bytes += qp.pkt.size;
      if (qp.pkt.source_ue >= 0) {
        lte_delays_.push_back(delay);
        ues_[static_cast<std::size_t>(qp.pkt.source_ue)].metrics.forwarded_packets++;
      } else {
        bg_delays_.push_back(delay);
      }
      if (qp.pkt.sla_mark == SlaMark::kSla) metrics_.sla_forwarded++;
      onu.queues.note_forwarded(qp);
    }
    return;
  }

  // batches from the cell arriving at its ONU
  OnuState& onu = onus_[static_cast<std::size_t>(ev.target)];
  while (!deliveries_.empty() && deliveries_.front().due <= ev.time) {
    CellDelivery d = std::move(deliveries_.front());
    deliveries_.pop_front();
    const UeState& ue = ues_[static_cast<std::size_t>(d.ue)];
    const bool tracked = ue.learning && ue.pendings.count(d.tti) > 0;
    if (tracked) onu.queues.open_batch(d.ue, d.tti, static_cast<int>(d.packets.size()));
    for (const Packet& p : d.packets) {
      const std::int64_t overflow_before = onu.queues.overflow_drops();
      onu.queues.enqueue(p, tracked ? d.tti : -1);
      if (onu.queues.overflow_drops() > overflow_before) {
        metrics_.total.dropped_onu_overflow++;
        metrics_.lte.dropped_onu_overflow++;
        if (p.sla_mark == SlaMark::kSla) metrics_.sla_dropped++;
      }
    }
  }
}

void Engine::finish_residuals() {
  // everything still buffered or in flight at the horizon is residual
  for (const UeState& ue : ues_) {
    metrics_.total.residual_packets += static_cast<std::int64_t>(ue.buffer.size());
    metrics_.lte.residual_packets += static_cast<std::int64_t>(ue.buffer.size());
  }
  for (const CellDelivery& d : deliveries_) {
    metrics_.total.residual_packets += static_cast<std::int64_t>(d.packets.size());
    metrics_.lte.residual_packets += static_cast<std::int64_t>(d.packets.size());
  }
  for (const OnuState& onu : onus_) {
    const auto [from_ues, from_bg] = onu.queues.packets_by_origin();
    metrics_.total.residual_packets += from_ues + from_bg;
    metrics_.lte.residual_packets += from_ues;
    metrics_.background.residual_packets += from_bg;
  }
  for (const UpstreamBurst& b : olt_inbound_) {
    metrics_.total.residual_packets += static_cast<std::int64_t>(b.packets.size());
    for (const QueuedPacket& qp : b.packets) {
      origin_counters(qp.pkt.source_ue).residual_packets++;
    }
  }
}

void Engine::finalize_metrics() {
  finish_residuals();

  auto fill_delay = [](std::vector<Microseconds>* delays, double* mean_ms, double* p95_ms) {
    if (delays->empty()) return;
    double sum = 0.0;
    for (Microseconds d : *delays) sum += static_cast<double>(d);
    *mean_ms = sum / static_cast<double>(delays->size()) / 1000.0;
    if (p95_ms != nullptr) {
      std::sort(delays->begin(), delays->end());
      const auto idx = static_cast<std::size_t>(0.95 * static_cast<double>(delays->size() - 1));
      *p95_ms = static_cast<double>((*delays)[idx]) / 1000.0;
    }
  };
  fill_delay(&lte_delays_, &metrics_.lte_delay_mean_ms, &metrics_.lte_delay_p95_ms);
  fill_delay(&bg_delays_, &metrics_.bg_delay_mean_ms, nullptr);

  for (const UeState& ue : ues_) metrics_.ues.push_back(ue.metrics);
  for (const OnuState& onu : onus_) {
    OnuMetrics om = onu.metrics;
    om.gross_income = onu.queues.gross_income();
    om.refunds = onu.queues.refunds();
    metrics_.onus.push_back(om);
  }

  audit("packet conservation (total)", metrics_.total.generated_packets ==
                                           metrics_.total.accounted());
  audit("packet conservation (lte)", metrics_.lte.generated_packets == metrics_.lte.accounted());
  audit("packet conservation (background)",
        metrics_.background.generated_packets == metrics_.background.accounted());
  std::int64_t outstanding = 0;
  for (const UeState& ue : ues_) outstanding += static_cast<std::int64_t>(ue.pendings.size());
  audit("pending feedback bookkeeping",
        metrics_.la_pending_created == metrics_.la_pending_resolved + outstanding);
}

RunMetrics Engine::run() {
  setup();
  if (end_us_ > 0) {
    queue_.schedule(0, EventKind::CYCLE_START, kOltTarget);
    if (kTtiUs <= end_us_) {
      queue_.schedule(kTtiUs, EventKind::PACKET_GEN, 0);
      queue_.schedule(kTtiUs, EventKind::TTI_TICK, 0);
    }
    Microseconds last_time = 0;
    while (!queue_.empty() && queue_.peek_time() <= end_us_) {
      const SimEvent ev = queue_.pop_next();
      audit("clock monotonicity", ev.time >= last_time);
      last_time = ev.time;
      switch (ev.kind) {
        case EventKind::PACKET_GEN: on_packet_gen(ev); break;
        case EventKind::TTI_TICK: on_tti_tick(ev); break;
        case EventKind::CYCLE_START: on_cycle_start(ev); break;
        case EventKind::GRANT_ARRIVAL: on_grant_arrival(ev); break;
        case EventKind::DATA_ARRIVAL: on_data_arrival(ev); break;
        case EventKind::REPORT_ARRIVAL: on_report_arrival(ev); break;
      }
    }
  }
  finalize_metrics();
  return metrics_;
}

}  // namespace

RunMetrics run_simulation(const RunConfig& cfg) {
  Engine engine(cfg);
  return engine.run();
}

}  // namespace woin
