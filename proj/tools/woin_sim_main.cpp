// woin-sim: batch experiment runner for the integrated LTE/EPON simulator.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "woin/config.hpp"
#include "woin/scenario.hpp"
#include "woin/simulation.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) seeds.push_back(std::stoull(item));
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"woin-sim: LTE-over-EPON opportunistic scheduling simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario preset and emit plot tables");
  std::string preset_name = "full_scale";
  std::string seeds_csv = "1";
  std::string out_dir = "out";
  std::string format = "csv";
  std::string config_path;
  bool trace_la = false;
  bool trace_auction = false;
  run->add_option("--preset", preset_name, "scenario preset name")
      ->check(CLI::IsMember([] {
        std::vector<std::string> names;
        for (const auto& p : woin::all_presets()) names.push_back(p.name);
        return names;
      }()));
  run->add_option("--seeds", seeds_csv, "comma-separated run seeds (default 1)");
  run->add_option("--out", out_dir, "output directory (default ./out)");
  run->add_option("--format", format, "csv, json or both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  run->add_option("--config", config_path, "JSON overlay applied to every run config");
  run->add_flag("--trace-la", trace_la, "write per-decision action probability traces");
  run->add_flag("--trace-auction", trace_auction, "write per-cycle auction ledgers");

  auto* validate = app.add_subcommand("validate", "validate a config overlay and exit");
  std::string validate_path;
  validate->add_option("--config", validate_path, "JSON config file")->required();

  auto* presets = app.add_subcommand("presets", "list available presets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      for (const auto& p : woin::all_presets()) {
        std::cout << p.name << "  -  " << p.description << "\n";
      }
      return 0;
    }
    if (validate->parsed()) {
      woin::RunConfig cfg;
      woin::overlay_run_config_json(&cfg, read_file(validate_path));
      const auto problems = cfg.validate();
      if (problems.empty()) {
        std::cout << "config ok\n";
        return 0;
      }
      for (const auto& p : problems) std::cerr << p << "\n";
      return 1;
    }

    const woin::ScenarioPreset* preset = woin::find_preset(preset_name);
    if (preset == nullptr) {
      std::cerr << "unknown preset: " << preset_name << "\n";
      return 1;
    }
    const auto seeds = parse_seeds(seeds_csv);
    if (seeds.empty()) {
      std::cerr << "no seeds given\n";
      return 1;
    }
    std::string overlay;
    if (!config_path.empty()) overlay = read_file(config_path);

    woin::TraceConfig trace;
    if (trace_la) {
      trace.la_trace_path = (std::filesystem::path(out_dir) / (preset_name + "_la")).string();
    }
    if (trace_auction) {
      trace.auction_trace_path =
          (std::filesystem::path(out_dir) / (preset_name + "_auction")).string();
    }
    if (trace_la || trace_auction) std::filesystem::create_directories(out_dir);

    const woin::ScenarioReport report = woin::run_scenario(
        *preset, seeds, /*threads=*/0, overlay,
        (trace_la || trace_auction) ? &trace : nullptr);
    woin::emit_report(report, format, out_dir);

    std::cout << "preset " << preset_name << ": " << report.points.size() << " load points x "
              << seeds.size() << " seeds written to " << out_dir << "\n";
    if (!report.all_audits_passed()) {
      std::cerr << "invariant audits FAILED; see per-run audit_failures\n";
      for (const auto& point : report.points) {
        for (const auto& m : point.per_seed) {
          for (const auto& f : m.audit_failures) {
            std::cerr << "  load " << point.load << " seed " << m.seed << ": " << f << "\n";
          }
        }
      }
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
