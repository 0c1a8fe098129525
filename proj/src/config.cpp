#include "woin/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace woin {

using nlohmann::json;

std::string to_string(SchedulerMode mode) {
  switch (mode) {
    case SchedulerMode::AUORA_LASA: return "AUORA_LASA";
    case SchedulerMode::IPACT: return "IPACT";
    case SchedulerMode::THROUGHPUT: return "THROUGHPUT";
  }
  return "?";
}

bool scheduler_mode_from_string(const std::string& s, SchedulerMode* out) {
  if (s == "AUORA_LASA") *out = SchedulerMode::AUORA_LASA;
  else if (s == "IPACT") *out = SchedulerMode::IPACT;
  else if (s == "THROUGHPUT") *out = SchedulerMode::THROUGHPUT;
  else return false;
  return true;
}

// CQI-style 15-step table: QPSK through 64-QAM with rising code rates.
// bytes_per_rc = efficiency (bit/RE) * 6 PRB * 12 subcarriers * 14 symbols / 8.
const std::vector<McsEntry>& default_mcs_table() {
  static const std::vector<McsEntry> table = {
      {-6.7, 19},  {-4.7, 29},  {-2.3, 47},  {0.2, 75},   {2.4, 110},
      {4.3, 148},  {5.9, 186},  {8.1, 241},  {10.3, 303}, {11.7, 344},
      {14.1, 418}, {16.3, 491}, {18.7, 570}, {21.0, 644}, {22.7, 699},
  };
  return table;
}

std::int64_t RunConfig::max_price() const {
  std::int64_t m = sched.base_price;
  for (std::int64_t lv : sched.price_levels) m = std::max(m, lv * sched.base_price);
  return m;
}

Microseconds RunConfig::packet_deadline_us(PacketClass c) const {
  switch (c) {
    case PacketClass::kVoice: return sched.voice_deadline_us;
    case PacketClass::kVideo: return sched.video_deadline_us;
    default: return sched.data_deadline_us;
  }
}

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> problems;
  auto bad = [&](const std::string& field, const std::string& msg) {
    problems.push_back(field + ": " + msg);
  };

  if (sim_duration_s < 0.0) bad("sim_duration_s", "must be >= 0");
  if (onu_count < 1) bad("onu_count", "must be >= 1");
  if (link_rate_bps <= 0.0) bad("link_rate_bps", "must be > 0");
  if (guard_us < 0) bad("guard_us", "must be >= 0");
  if (max_cycle_us <= 0) bad("max_cycle_us", "must be > 0");
  if (prop_delay_min_us < 0) bad("prop_delay_min_us", "must be >= 0");
  if (prop_delay_max_us < prop_delay_min_us) bad("prop_delay_max_us", "must be >= min");
  if (lte_share <= 0.0 || lte_share > 1.0) bad("lte_share", "must be in (0, 1]");
  if (report_bytes < 1) bad("report_bytes", "must be >= 1");

  if (static_cast<int>(background.size()) > onu_count - 1) {
    bad("background", "more background configs than non-LTE ONUs");
  }
  for (std::size_t i = 0; i < background.size(); ++i) {
    const auto& b = background[i];
    const std::string f = "background[" + std::to_string(i) + "]";
    if (b.offered_bytes_per_s < 0.0) bad(f + ".offered_bytes_per_s", "must be >= 0");
    if (b.sla_fraction < 0.0 || b.sla_fraction > 1.0) bad(f + ".sla_fraction", "must be in [0,1]");
    if (b.asla_price < 1) bad(f + ".asla_price", "must be >= 1");
    if (b.min_packet_bytes < 1 || b.max_packet_bytes < b.min_packet_bytes) {
      bad(f + ".packet_bytes", "need 1 <= min <= max");
    }
  }

  for (std::size_t i = 0; i < cell.groups.size(); ++i) {
    const auto& g = cell.groups[i];
    const std::string f = "cell.groups[" + std::to_string(i) + "]";
    if (g.count < 0) bad(f + ".count", "must be >= 0");
    if (g.mean_on_s <= 0.0 || g.mean_off_s <= 0.0) bad(f + ".mean_on/off_s", "must be > 0");
    if (g.talkspurt_rate_bps <= 0.0) bad(f + ".talkspurt_rate_bps", "must be > 0");
    if (g.packet_interval_us <= 0) bad(f + ".packet_interval_us", "must be > 0");
    if (g.sla_rate_bytes_per_s < 0.0) bad(f + ".sla_rate_bytes_per_s", "must be >= 0");
  }
  if (cell.use_ppp && cell.ppp_intensity_per_km2 < 0.0) {
    bad("cell.ppp_intensity_per_km2", "must be >= 0");
  }
  if (cell.cell_radius_m <= 0.0) bad("cell.cell_radius_m", "must be > 0");

  if (radio.n_prb_per_rc < 1) bad("radio.n_prb_per_rc", "must be >= 1");
  if (radio.rc_count < 1) bad("radio.rc_count", "must be >= 1");
  if (radio.alpha < 0.0 || radio.alpha > 1.0) bad("radio.alpha", "must be in [0,1]");
  if (radio.shadowing_sigma_db < 0.0) bad("radio.shadowing_sigma_db", "must be >= 0");
  const auto& table = radio.mcs_table.empty() ? default_mcs_table() : radio.mcs_table;
  for (std::size_t i = 1; i < table.size(); ++i) {
    if (table[i].threshold_db <= table[i - 1].threshold_db ||
        table[i].bytes_per_rc < table[i - 1].bytes_per_rc) {
      bad("radio.mcs_table", "thresholds must increase and bytes must be non-decreasing");
      break;
    }
  }

  if (sched.window_ttis < 1) bad("sched.window_ttis", "must be >= 1");
  if (sched.buffer_state_count < 1) bad("sched.buffer_state_count", "must be >= 1");
  if (sched.base_price < 1) bad("sched.base_price", "must be >= 1");
  if (sched.price_levels.empty()) bad("sched.price_levels", "need at least one level");
  std::int64_t prev = 1;
  for (std::int64_t lv : sched.price_levels) {
    if (lv <= prev) {
      bad("sched.price_levels", "levels must exceed the base multiple and strictly increase");
      break;
    }
    prev = lv;
  }
  if (sched.ue_buffer_bytes < 1) bad("sched.ue_buffer_bytes", "must be >= 1");
  if (sched.voice_deadline_us <= 0 || sched.video_deadline_us <= 0 || sched.data_deadline_us <= 0) {
    bad("sched.deadlines", "must be > 0");
  }
  return problems;
}

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& path) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) { ok = true; break; }
    }
    if (!ok) throw std::runtime_error("config: unknown key '" + path + key + "'");
  }
}

template <typename T>
void get_if(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

void get_us(const json& j, const char* key, Microseconds* out) {
  if (j.contains(key)) *out = j.at(key).get<std::int64_t>();
}

json group_to_json(const UeGroupConfig& g) {
  return json{{"count", g.count},
              {"mean_on_s", g.mean_on_s},
              {"mean_off_s", g.mean_off_s},
              {"talkspurt_rate_bps", g.talkspurt_rate_bps},
              {"packet_interval_us", g.packet_interval_us},
              {"sla_rate_bytes_per_s", g.sla_rate_bytes_per_s},
              {"learning", g.learning},
              {"pkt_class", static_cast<int>(g.pkt_class)}};
}

UeGroupConfig group_from_json(const json& j, const std::string& path) {
  check_keys(j, {"count", "mean_on_s", "mean_off_s", "talkspurt_rate_bps",
                 "packet_interval_us", "sla_rate_bytes_per_s", "learning", "pkt_class"},
             path);
  UeGroupConfig g;
  get_if(j, "count", &g.count);
  get_if(j, "mean_on_s", &g.mean_on_s);
  get_if(j, "mean_off_s", &g.mean_off_s);
  get_if(j, "talkspurt_rate_bps", &g.talkspurt_rate_bps);
  get_us(j, "packet_interval_us", &g.packet_interval_us);
  get_if(j, "sla_rate_bytes_per_s", &g.sla_rate_bytes_per_s);
  get_if(j, "learning", &g.learning);
  if (j.contains("pkt_class")) g.pkt_class = static_cast<PacketClass>(j.at("pkt_class").get<int>());
  return g;
}

json background_to_json(const BackgroundConfig& b) {
  return json{{"offered_bytes_per_s", b.offered_bytes_per_s},
              {"sla_fraction", b.sla_fraction},
              {"asla_price", b.asla_price},
              {"min_packet_bytes", b.min_packet_bytes},
              {"max_packet_bytes", b.max_packet_bytes}};
}

BackgroundConfig background_from_json(const json& j, const std::string& path) {
  check_keys(j, {"offered_bytes_per_s", "sla_fraction", "asla_price", "min_packet_bytes",
                 "max_packet_bytes"},
             path);
  BackgroundConfig b;
  get_if(j, "offered_bytes_per_s", &b.offered_bytes_per_s);
  get_if(j, "sla_fraction", &b.sla_fraction);
  get_if(j, "asla_price", &b.asla_price);
  get_if(j, "min_packet_bytes", &b.min_packet_bytes);
  get_if(j, "max_packet_bytes", &b.max_packet_bytes);
  return b;
}

void overlay_from_json(RunConfig* cfg, const json& j) {
  check_keys(j, {"seed", "sim_duration_s", "onu_count", "link_rate_bps", "guard_us",
                 "max_cycle_us", "prop_delay_min_us", "prop_delay_max_us", "lte_share",
                 "scheduler_mode", "report_bytes", "cell", "background", "radio", "sched",
                 "la", "trace"},
             "");
  get_if(j, "seed", &cfg->seed);
  get_if(j, "sim_duration_s", &cfg->sim_duration_s);
  get_if(j, "onu_count", &cfg->onu_count);
  get_if(j, "link_rate_bps", &cfg->link_rate_bps);
  get_us(j, "guard_us", &cfg->guard_us);
  get_us(j, "max_cycle_us", &cfg->max_cycle_us);
  get_us(j, "prop_delay_min_us", &cfg->prop_delay_min_us);
  get_us(j, "prop_delay_max_us", &cfg->prop_delay_max_us);
  get_if(j, "lte_share", &cfg->lte_share);
  get_if(j, "report_bytes", &cfg->report_bytes);
  if (j.contains("scheduler_mode")) {
    const auto s = j.at("scheduler_mode").get<std::string>();
    if (!scheduler_mode_from_string(s, &cfg->scheduler_mode)) {
      throw std::runtime_error("config: scheduler_mode must be AUORA_LASA, IPACT or THROUGHPUT");
    }
  }
  if (j.contains("cell")) {
    const json& c = j.at("cell");
    check_keys(c, {"groups", "use_ppp", "ppp_intensity_per_km2", "cell_radius_m",
                   "min_ue_distance_m"},
               "cell.");
    if (c.contains("groups")) {
      cfg->cell.groups.clear();
      for (const auto& g : c.at("groups")) {
        cfg->cell.groups.push_back(group_from_json(g, "cell.groups."));
      }
    }
    get_if(c, "use_ppp", &cfg->cell.use_ppp);
    get_if(c, "ppp_intensity_per_km2", &cfg->cell.ppp_intensity_per_km2);
    get_if(c, "cell_radius_m", &cfg->cell.cell_radius_m);
    get_if(c, "min_ue_distance_m", &cfg->cell.min_ue_distance_m);
  }
  if (j.contains("background")) {
    cfg->background.clear();
    for (const auto& b : j.at("background")) {
      cfg->background.push_back(background_from_json(b, "background."));
    }
  }
  if (j.contains("radio")) {
    const json& r = j.at("radio");
    check_keys(r, {"pathloss_a", "pathloss_b", "shadowing_sigma_db", "p_max_dbm", "p_o_dbm",
                   "alpha", "power_control_uses_min", "n_prb_per_rc", "rc_count",
                   "center_frequency_ghz", "noise_figure_db", "interferer_count",
                   "interferers_full_power", "inter_site_distance_m", "mcs_table"},
               "radio.");
    auto& rc = cfg->radio;
    get_if(r, "pathloss_a", &rc.pathloss_a);
    get_if(r, "pathloss_b", &rc.pathloss_b);
    get_if(r, "shadowing_sigma_db", &rc.shadowing_sigma_db);
    get_if(r, "p_max_dbm", &rc.p_max_dbm);
    get_if(r, "p_o_dbm", &rc.p_o_dbm);
    get_if(r, "alpha", &rc.alpha);
    get_if(r, "power_control_uses_min", &rc.power_control_uses_min);
    get_if(r, "n_prb_per_rc", &rc.n_prb_per_rc);
    get_if(r, "rc_count", &rc.rc_count);
    get_if(r, "center_frequency_ghz", &rc.center_frequency_ghz);
    get_if(r, "noise_figure_db", &rc.noise_figure_db);
    get_if(r, "interferer_count", &rc.interferer_count);
    get_if(r, "interferers_full_power", &rc.interferers_full_power);
    get_if(r, "inter_site_distance_m", &rc.inter_site_distance_m);
    if (r.contains("mcs_table")) {
      rc.mcs_table.clear();
      for (const auto& e : r.at("mcs_table")) {
        check_keys(e, {"threshold_db", "bytes_per_rc"}, "radio.mcs_table.");
        McsEntry me;
        get_if(e, "threshold_db", &me.threshold_db);
        get_if(e, "bytes_per_rc", &me.bytes_per_rc);
        rc.mcs_table.push_back(me);
      }
    }
  }
  if (j.contains("sched")) {
    const json& s = j.at("sched");
    check_keys(s, {"window_ttis", "buffer_state_count", "base_price", "price_levels",
                   "ue_buffer_bytes", "voice_deadline_us", "video_deadline_us",
                   "data_deadline_us"},
               "sched.");
    auto& sc = cfg->sched;
    get_if(s, "window_ttis", &sc.window_ttis);
    get_if(s, "buffer_state_count", &sc.buffer_state_count);
    get_if(s, "base_price", &sc.base_price);
    if (s.contains("price_levels")) {
      sc.price_levels = s.at("price_levels").get<std::vector<std::int64_t>>();
    }
    get_if(s, "ue_buffer_bytes", &sc.ue_buffer_bytes);
    get_us(s, "voice_deadline_us", &sc.voice_deadline_us);
    get_us(s, "video_deadline_us", &sc.video_deadline_us);
    get_us(s, "data_deadline_us", &sc.data_deadline_us);
  }
  if (j.contains("la")) {
    check_keys(j.at("la"), {"raw_negative_penalty_spread"}, "la.");
    get_if(j.at("la"), "raw_negative_penalty_spread", &cfg->la.raw_negative_penalty_spread);
  }
  if (j.contains("trace")) {
    check_keys(j.at("trace"), {"la_trace_path", "auction_trace_path"}, "trace.");
    get_if(j.at("trace"), "la_trace_path", &cfg->trace.la_trace_path);
    get_if(j.at("trace"), "auction_trace_path", &cfg->trace.auction_trace_path);
  }
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["sim_duration_s"] = cfg.sim_duration_s;
  j["onu_count"] = cfg.onu_count;
  j["link_rate_bps"] = cfg.link_rate_bps;
  j["guard_us"] = cfg.guard_us;
  j["max_cycle_us"] = cfg.max_cycle_us;
  j["prop_delay_min_us"] = cfg.prop_delay_min_us;
  j["prop_delay_max_us"] = cfg.prop_delay_max_us;
  j["lte_share"] = cfg.lte_share;
  j["scheduler_mode"] = to_string(cfg.scheduler_mode);
  j["report_bytes"] = cfg.report_bytes;

  json cell;
  cell["groups"] = json::array();
  for (const auto& g : cfg.cell.groups) cell["groups"].push_back(group_to_json(g));
  cell["use_ppp"] = cfg.cell.use_ppp;
  cell["ppp_intensity_per_km2"] = cfg.cell.ppp_intensity_per_km2;
  cell["cell_radius_m"] = cfg.cell.cell_radius_m;
  cell["min_ue_distance_m"] = cfg.cell.min_ue_distance_m;
  j["cell"] = cell;

  j["background"] = json::array();
  for (const auto& b : cfg.background) j["background"].push_back(background_to_json(b));

  json r;
  r["pathloss_a"] = cfg.radio.pathloss_a;
  r["pathloss_b"] = cfg.radio.pathloss_b;
  r["shadowing_sigma_db"] = cfg.radio.shadowing_sigma_db;
  r["p_max_dbm"] = cfg.radio.p_max_dbm;
  r["p_o_dbm"] = cfg.radio.p_o_dbm;
  r["alpha"] = cfg.radio.alpha;
  r["power_control_uses_min"] = cfg.radio.power_control_uses_min;
  r["n_prb_per_rc"] = cfg.radio.n_prb_per_rc;
  r["rc_count"] = cfg.radio.rc_count;
  r["center_frequency_ghz"] = cfg.radio.center_frequency_ghz;
  r["noise_figure_db"] = cfg.radio.noise_figure_db;
  r["interferer_count"] = cfg.radio.interferer_count;
  r["interferers_full_power"] = cfg.radio.interferers_full_power;
  r["inter_site_distance_m"] = cfg.radio.inter_site_distance_m;
  if (!cfg.radio.mcs_table.empty()) {
    r["mcs_table"] = json::array();
    for (const auto& e : cfg.radio.mcs_table) {
      r["mcs_table"].push_back({{"threshold_db", e.threshold_db},
                                {"bytes_per_rc", e.bytes_per_rc}});
    }
  }
  j["radio"] = r;

  json s;
  s["window_ttis"] = cfg.sched.window_ttis;
  s["buffer_state_count"] = cfg.sched.buffer_state_count;
  s["base_price"] = cfg.sched.base_price;
  s["price_levels"] = cfg.sched.price_levels;
  s["ue_buffer_bytes"] = cfg.sched.ue_buffer_bytes;
  s["voice_deadline_us"] = cfg.sched.voice_deadline_us;
  s["video_deadline_us"] = cfg.sched.video_deadline_us;
  s["data_deadline_us"] = cfg.sched.data_deadline_us;
  j["sched"] = s;

  j["la"] = json{{"raw_negative_penalty_spread", cfg.la.raw_negative_penalty_spread}};
  j["trace"] = json{{"la_trace_path", cfg.trace.la_trace_path},
                    {"auction_trace_path", cfg.trace.auction_trace_path}};
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& json_text) {
  RunConfig cfg;
  overlay_run_config_json(&cfg, json_text);
  return cfg;
}

void overlay_run_config_json(RunConfig* cfg, const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: JSON parse error: ") + e.what());
  }
  overlay_from_json(cfg, j);
}

std::vector<McsEntry> mcs_table_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mcs table: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const json j = json::parse(ss.str());
  std::vector<McsEntry> table;
  for (const auto& e : j) {
    check_keys(e, {"threshold_db", "bytes_per_rc"}, "mcs_table.");
    McsEntry me;
    me.threshold_db = e.at("threshold_db").get<double>();
    me.bytes_per_rc = e.at("bytes_per_rc").get<std::int32_t>();
    table.push_back(me);
  }
  return table;
}

}  // namespace woin
