// Experiment presets and the sweep runner behind the CLI.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "woin/config.hpp"
#include "woin/metrics.hpp"

namespace woin {

struct ScenarioPreset {
  std::string name;
  std::string description;
  std::vector<double> load_points;
  // Fully resolved config for one (load, seed) cell of the sweep.
  std::function<RunConfig(double load, std::uint64_t seed)> make_config;
};

struct LoadPointResult {
  double load = 0.0;
  std::vector<RunMetrics> per_seed;

  // mean and sample stddev over seeds of one scalar metric
  struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
  };
  Stat stat(double (*extract)(const RunMetrics&)) const;
};

struct ScenarioReport {
  std::string preset;
  std::vector<std::uint64_t> seeds;
  std::vector<LoadPointResult> points;
  bool all_audits_passed() const;
};

const std::vector<ScenarioPreset>& all_presets();
const ScenarioPreset* find_preset(const std::string& name);

// One full simulation per (load point, seed); runs may execute on up to
// `threads` workers (<=0: WOIN_SIM_THREADS or hardware concurrency). The
// config_overlay_json, when non-empty, is applied to every resolved config.
ScenarioReport run_scenario(const ScenarioPreset& preset,
                            const std::vector<std::uint64_t>& seeds, int threads = 0,
                            const std::string& config_overlay_json = "",
                            const TraceConfig* trace = nullptr);

// Emission: one summary table per report plus a per-seed table, either CSV
// (header row documents columns) or JSON (schema_version field).
void emit_report(const ScenarioReport& report, const std::string& format,
                 const std::string& out_dir);

}  // namespace woin
