#include "woin/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "woin/simulation.hpp"

namespace woin {

using nlohmann::json;

namespace {

// Desk-scale EPON shared by the sweep presets: 4 ONUs on a 40 Mb/s link give
// a usable cycle capacity of ~9.1 kB, i.e. ~2.28 kB (~9.1 Mb/s) per ONU
// share. "Load" is offered traffic over that share.
constexpr double kDeskLinkBps = 40e6;
constexpr int kDeskOnus = 4;
constexpr double kDeskShareBytesPerS = 1.14e6;  // per-ONU share, B/s

RunConfig desk_base(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.sim_duration_s = 2.0;
  cfg.onu_count = kDeskOnus;
  cfg.link_rate_bps = kDeskLinkBps;
  cfg.lte_share = 0.25;
  cfg.cell.cell_radius_m = 250.0;
  return cfg;
}

// All-ONU load sweep: the cell's UEs and the background ONUs all offer
// load * share, with the given fraction of it under SLA.
RunConfig sweep_config(double load, std::uint64_t seed, double sla_fraction) {
  RunConfig cfg = desk_base(seed);
  const double per_onu = load * kDeskShareBytesPerS;

  UeGroupConfig g;
  g.count = 8;
  g.learning = true;
  g.pkt_class = PacketClass::kVoice;
  g.packet_interval_us = 2000;
  g.mean_on_s = 1.0;
  g.mean_off_s = 1.5;
  const double per_ue = per_onu / static_cast<double>(g.count);
  const double on_fraction = g.mean_on_s / (g.mean_on_s + g.mean_off_s);
  g.talkspurt_rate_bps = per_ue * 8.0 / on_fraction;
  g.sla_rate_bytes_per_s = sla_fraction * per_ue;
  cfg.cell.groups = {g};

  BackgroundConfig bg;
  bg.offered_bytes_per_s = per_onu;
  bg.sla_fraction = sla_fraction;
  bg.asla_price = 1;
  cfg.background.assign(static_cast<std::size_t>(kDeskOnus - 1), bg);
  return cfg;
}

// Two learning UEs against a fixed body of base-price traffic. The
// background ONUs run pure-SLA loads so the auction residual is about one
// ONU share; the unmarked UEs fill bg_load of it, the marked pair ~0.2.
RunConfig marked_ue_config(double load, std::uint64_t seed, double bg_load) {
  RunConfig cfg = desk_base(seed);
  cfg.sim_duration_s = 4.0;

  UeGroupConfig marked;
  marked.count = 2;
  marked.learning = true;
  marked.pkt_class = PacketClass::kVoice;
  marked.packet_interval_us = 1000;
  marked.mean_on_s = 1.0;
  marked.mean_off_s = 1.5;
  marked.sla_rate_bytes_per_s = 0.0;  // opportunistic only
  const double marked_per_ue = 0.10 * load * kDeskShareBytesPerS;
  marked.talkspurt_rate_bps = marked_per_ue * 8.0 / 0.4;

  UeGroupConfig unmarked = marked;
  unmarked.count = 8;
  unmarked.learning = false;
  const double unmarked_per_ue = bg_load * kDeskShareBytesPerS / 8.0;
  unmarked.talkspurt_rate_bps = unmarked_per_ue * 8.0 / 0.4;

  cfg.cell.groups = {marked, unmarked};

  BackgroundConfig bg;
  bg.offered_bytes_per_s = 0.95 * kDeskShareBytesPerS;
  bg.sla_fraction = 1.0;
  bg.asla_price = 1;
  cfg.background.assign(static_cast<std::size_t>(kDeskOnus - 1), bg);
  return cfg;
}

// Table-scale defaults: 16 ONUs at 1 Gb/s, VoIP UEs placed by a PPP in the
// centre cell, 90% of the link carried by background ONUs.
RunConfig full_scale_config(double load, std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;

  UeGroupConfig g;
  g.count = 0;
  g.learning = true;
  g.pkt_class = PacketClass::kVoice;
  g.packet_interval_us = 20000;
  g.talkspurt_rate_bps = 64000.0;
  g.mean_on_s = 1.0;
  g.mean_off_s = 1.5;
  g.sla_rate_bytes_per_s = 320.0;  // 10% of the mean VoIP rate
  cfg.cell.groups = {g};
  cfg.cell.use_ppp = true;
  cfg.cell.ppp_intensity_per_km2 = 127.0;  // ~25 UEs in the 250 m disc

  BackgroundConfig bg;
  bg.offered_bytes_per_s = load * 0.9 * 125e6 / 15.0;
  bg.sla_fraction = 0.5;
  bg.asla_price = 1;
  cfg.background.assign(15, bg);
  return cfg;
}

std::vector<double> steps(double from, double to, double step) {
  std::vector<double> v;
  for (double x = from; x <= to + 1e-9; x += step) v.push_back(std::round(x * 100.0) / 100.0);
  return v;
}

int env_threads() {
  const char* env = std::getenv("WOIN_SIM_THREADS");
  if (env != nullptr) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<ScenarioPreset>& all_presets() {
  static const std::vector<ScenarioPreset> presets = {
      {"load_sweep_sla10", "all-ONU load sweep, SLA at 10% of offered traffic",
       steps(0.1, 1.2, 0.1),
       [](double load, std::uint64_t seed) { return sweep_config(load, seed, 0.10); }},
      {"load_sweep_sla50", "all-ONU load sweep, SLA at 50% of offered traffic",
       steps(0.1, 1.2, 0.1),
       [](double load, std::uint64_t seed) { return sweep_config(load, seed, 0.50); }},
      {"marked_ue_low_bg", "two learning UEs, unmarked traffic at 20% of the share",
       {1.0},
       [](double load, std::uint64_t seed) { return marked_ue_config(load, seed, 0.20); }},
      {"marked_ue_high_bg", "two learning UEs, unmarked traffic at 70% of the share",
       {1.0},
       [](double load, std::uint64_t seed) { return marked_ue_config(load, seed, 0.70); }},
      {"profit_share_sweep", "load sweep reporting the OLT/ONU revenue split",
       steps(0.2, 1.2, 0.1),
       [](double load, std::uint64_t seed) { return sweep_config(load, seed, 0.10); }},
      {"full_scale", "16-ONU, 1 Gb/s, 10 s run at the table defaults",
       {0.9},
       full_scale_config},
  };
  return presets;
}

const ScenarioPreset* find_preset(const std::string& name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

LoadPointResult::Stat LoadPointResult::stat(double (*extract)(const RunMetrics&)) const {
  Stat s;
  if (per_seed.empty()) return s;
  for (const auto& m : per_seed) s.mean += extract(m);
  s.mean /= static_cast<double>(per_seed.size());
  if (per_seed.size() > 1) {
    double acc = 0.0;
    for (const auto& m : per_seed) {
      const double d = extract(m) - s.mean;
      acc += d * d;
    }
    s.stddev = std::sqrt(acc / static_cast<double>(per_seed.size() - 1));
  }
  return s;
}

bool ScenarioReport::all_audits_passed() const {
  for (const auto& point : points) {
    for (const auto& m : point.per_seed) {
      if (!m.audit_failures.empty()) return false;
    }
  }
  return true;
}

ScenarioReport run_scenario(const ScenarioPreset& preset,
                            const std::vector<std::uint64_t>& seeds, int threads,
                            const std::string& config_overlay_json,
                            const TraceConfig* trace) {
  if (seeds.empty()) throw std::invalid_argument("run_scenario: need at least one seed");
  ScenarioReport report;
  report.preset = preset.name;
  report.seeds = seeds;
  report.points.resize(preset.load_points.size());
  for (std::size_t p = 0; p < preset.load_points.size(); ++p) {
    report.points[p].load = preset.load_points[p];
    report.points[p].per_seed.resize(seeds.size());
  }

  struct Job {
    std::size_t point;
    std::size_t seed_idx;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < preset.load_points.size(); ++p) {
    for (std::size_t s = 0; s < seeds.size(); ++s) jobs.push_back({p, s});
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure_msg;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size() || failed.load()) return;
      const Job job = jobs[k];
      try {
        RunConfig cfg = preset.make_config(preset.load_points[job.point], seeds[job.seed_idx]);
        if (!config_overlay_json.empty()) overlay_run_config_json(&cfg, config_overlay_json);
        if (trace != nullptr) {
          const std::string tag = "_" + std::to_string(preset.load_points[job.point]) + "_" +
                                  std::to_string(seeds[job.seed_idx]);
          if (!trace->la_trace_path.empty()) cfg.trace.la_trace_path = trace->la_trace_path + tag;
          if (!trace->auction_trace_path.empty()) {
            cfg.trace.auction_trace_path = trace->auction_trace_path + tag;
          }
        }
        report.points[job.point].per_seed[job.seed_idx] = run_simulation(cfg);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        failed = true;
        failure_msg = "seed " + std::to_string(seeds[job.seed_idx]) + " at load " +
                      std::to_string(preset.load_points[job.point]) + ": " + e.what();
        return;
      }
    }
  };

  int n_threads = threads > 0 ? threads : env_threads();
  n_threads = std::min<int>(n_threads, static_cast<int>(jobs.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw std::runtime_error("run_scenario: " + failure_msg);
  return report;
}

void emit_report(const ScenarioReport& report, const std::string& format,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("emit: cannot create " + out_dir + ": " + ec.message());

  const bool want_csv = format == "csv" || format == "both";
  const bool want_json = format == "json" || format == "both";
  if (!want_csv && !want_json) throw std::invalid_argument("emit: format must be csv or json");

  struct Column {
    const char* name;
    double (*get)(const RunMetrics&);
  };
  static const Column columns[] = {
      {"sla_drop_ratio", [](const RunMetrics& m) { return m.sla_drop_ratio(); }},
      {"forwarded_packets",
       [](const RunMetrics& m) { return static_cast<double>(m.total.forwarded_packets); }},
      {"lte_delay_mean_ms", [](const RunMetrics& m) { return m.lte_delay_mean_ms; }},
      {"lte_delay_p95_ms", [](const RunMetrics& m) { return m.lte_delay_p95_ms; }},
      {"payment_per_byte_learning",
       [](const RunMetrics& m) { return m.mean_converged_payment_per_byte_learning(); }},
      {"olt_revenue", [](const RunMetrics& m) { return m.olt_revenue; }},
      {"onu_profit_total", [](const RunMetrics& m) { return m.onu_profit_total(); }},
      {"onu_profit_share", [](const RunMetrics& m) { return m.onu_profit_share(); }},
  };

  if (want_csv) {
    {
      std::ofstream out(fs::path(out_dir) / (report.preset + "_summary.csv"));
      out << "load";
      for (const auto& c : columns) out << ',' << c.name << "_mean," << c.name << "_stddev";
      out << "\n";
      for (const auto& point : report.points) {
        out << format_double(point.load);
        for (const auto& c : columns) {
          const auto st = point.stat(c.get);
          out << ',' << format_double(st.mean) << ',' << format_double(st.stddev);
        }
        out << "\n";
      }
    }
    {
      std::ofstream out(fs::path(out_dir) / (report.preset + "_runs.csv"));
      out << "load,seed";
      for (const auto& c : columns) out << ',' << c.name;
      out << ",audit_failures\n";
      for (const auto& point : report.points) {
        for (std::size_t s = 0; s < point.per_seed.size(); ++s) {
          const RunMetrics& m = point.per_seed[s];
          out << format_double(point.load) << ',' << report.seeds[s];
          for (const auto& c : columns) out << ',' << format_double(c.get(m));
          out << ',' << m.audit_failures.size() << "\n";
        }
      }
    }
  }
  if (want_json) {
    json j;
    j["schema_version"] = 1;
    j["preset"] = report.preset;
    j["seeds"] = report.seeds;
    j["points"] = json::array();
    for (const auto& point : report.points) {
      json pj;
      pj["load"] = point.load;
      pj["aggregate"] = json::object();
      for (const auto& c : columns) {
        const auto st = point.stat(c.get);
        pj["aggregate"][c.name] = json{{"mean", st.mean}, {"stddev", st.stddev}};
      }
      pj["runs"] = json::array();
      for (const auto& m : point.per_seed) pj["runs"].push_back(json::parse(m.to_json()));
      j["points"].push_back(pj);
    }
    std::ofstream out(fs::path(out_dir) / (report.preset + ".json"));
    out << j.dump(2) << "\n";
  }
}

}  // namespace woin
