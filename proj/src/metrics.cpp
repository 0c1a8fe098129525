#include "woin/metrics.hpp"

#include "json.hpp"

namespace woin {

using nlohmann::json;

double RunMetrics::mean_converged_payment_per_byte_learning() const {
  double sum = 0.0;
  int n = 0;
  for (const auto& u : ues) {
    if (!u.learning) continue;
    sum += u.converged_payment_per_byte();
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

bool RunMetrics::conservation_ok() const {
  const auto ok = [](const PacketCounters& c) { return c.generated_packets == c.accounted(); };
  return ok(total) && ok(lte) && ok(background);
}

namespace {

json counters_to_json(const PacketCounters& c) {
  return json{{"generated_packets", c.generated_packets},
              {"generated_bytes", c.generated_bytes},
              {"forwarded_packets", c.forwarded_packets},
              {"forwarded_bytes", c.forwarded_bytes},
              {"dropped_lte_deadline", c.dropped_lte_deadline},
              {"dropped_ue_overflow", c.dropped_ue_overflow},
              {"dropped_onu_deadline", c.dropped_onu_deadline},
              {"dropped_onu_overflow", c.dropped_onu_overflow},
              {"residual_packets", c.residual_packets}};
}

}  // namespace

std::string RunMetrics::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  j["sim_duration_s"] = sim_duration_s;
  j["scheduler_mode"] = scheduler_mode;
  j["total"] = counters_to_json(total);
  j["lte"] = counters_to_json(lte);
  j["background"] = counters_to_json(background);
  j["sla_packets"] = sla_packets;
  j["sla_dropped"] = sla_dropped;
  j["sla_forwarded"] = sla_forwarded;
  j["sla_drop_ratio"] = sla_drop_ratio();
  j["lte_delay_mean_ms"] = lte_delay_mean_ms;
  j["lte_delay_p95_ms"] = lte_delay_p95_ms;
  j["bg_delay_mean_ms"] = bg_delay_mean_ms;
  j["olt_revenue"] = olt_revenue;
  j["onu_profit_total"] = onu_profit_total();
  j["onu_profit_share"] = onu_profit_share();
  j["sla_violation_cycles"] = sla_violation_cycles;
  j["cycles_run"] = cycles_run;
  j["tti_ticks"] = tti_ticks;
  j["la_updates"] = la_updates;
  j["la_pending_created"] = la_pending_created;
  j["la_pending_resolved"] = la_pending_resolved;
  j["mean_converged_payment_per_byte_learning"] = mean_converged_payment_per_byte_learning();

  j["ues"] = json::array();
  for (const auto& u : ues) {
    j["ues"].push_back(json{{"ue", u.ue},
                            {"learning", u.learning},
                            {"generated_packets", u.generated_packets},
                            {"forwarded_packets", u.forwarded_packets},
                            {"paid_total", u.paid_total},
                            {"bytes_total", u.bytes_total},
                            {"converged_asla_paid", u.converged_asla_paid},
                            {"converged_asla_bytes", u.converged_asla_bytes},
                            {"payment_per_byte", u.payment_per_byte()},
                            {"converged_payment_per_byte", u.converged_payment_per_byte()},
                            {"transmission_ratio", u.transmission_ratio()}});
  }
  j["onus"] = json::array();
  for (const auto& o : onus) {
    j["onus"].push_back(json{{"onu", o.onu},
                             {"gross_income", o.gross_income},
                             {"refunds", o.refunds},
                             {"vcg_paid", o.vcg_paid},
                             {"profit", o.profit()}});
  }
  j["audit_failures"] = audit_failures;
  return j.dump(2);
}

}  // namespace woin
