#include "woin/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace woin {

namespace {

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

}  // namespace

double pathloss_db(double distance_m, const ChannelConfig& cfg) {
  if (distance_m <= 0.0) throw std::invalid_argument("pathloss: distance must be > 0");
  return cfg.pathloss_a + cfg.pathloss_b * std::log10(distance_m / 1000.0);
}

double tx_power_dbm(double pathloss, int n_prb, const ChannelConfig& cfg) {
  if (n_prb < 1) throw std::invalid_argument("tx_power: n_prb must be >= 1");
  const double open_loop =
      cfg.p_o_dbm + cfg.alpha * pathloss + 10.0 * std::log10(static_cast<double>(n_prb));
  // Table form prints max(); the closed-loop convention clips at P_max.
  return cfg.power_control_uses_min ? std::min(cfg.p_max_dbm, open_loop)
                                    : std::max(cfg.p_max_dbm, open_loop);
}

std::int32_t bytes_per_rc(double sinr_db, const std::vector<McsEntry>& table) {
  std::int32_t bytes = 0;
  for (const McsEntry& e : table) {
    if (sinr_db >= e.threshold_db) bytes = e.bytes_per_rc;
  }
  return bytes;
}

RadioModel::RadioModel(const ChannelConfig& cfg, std::vector<Position> ue_positions,
                       RngStream* shadow_rng)
    : cfg_(cfg), positions_(std::move(ue_positions)) {
  table_ = cfg.mcs_table.empty() ? default_mcs_table() : cfg.mcs_table;
  total_loss_db_.reserve(positions_.size());
  for (const Position& pos : positions_) {
    const double d = std::max(1.0, std::hypot(pos.x, pos.y));
    total_loss_db_.push_back(pathloss_db(d, cfg_) +
                             shadow_rng->normal(0.0, cfg_.shadowing_sigma_db));
  }
  // thermal noise over one RC (n_prb * 180 kHz) plus the receiver figure
  const double bw_hz = static_cast<double>(cfg_.n_prb_per_rc) * 180e3;
  noise_dbm_per_rc_ = -174.0 + 10.0 * std::log10(bw_hz) + cfg_.noise_figure_db;
}

double RadioModel::ue_distance_m(int ue) const {
  const Position& pos = positions_[static_cast<std::size_t>(ue)];
  return std::max(1.0, std::hypot(pos.x, pos.y));
}

std::int32_t RadioModel::max_rc_bytes() const {
  std::int32_t best = 0;
  for (const McsEntry& e : table_) best = std::max(best, e.bytes_per_rc);
  return best;
}

LinkState RadioModel::refresh_links(RngStream* fading_rng) const {
  const int n_ues = static_cast<int>(positions_.size());
  const int n_rcs = cfg_.rc_count;
  LinkState ls;
  ls.q.assign(static_cast<std::size_t>(n_ues),
              std::vector<std::int32_t>(static_cast<std::size_t>(n_rcs), 0));
  ls.sinr_db.assign(static_cast<std::size_t>(n_ues * n_rcs), 0.0);
  if (n_ues == 0) return ls;

  // First-tier interference: one interfering UE per neighbouring cell,
  // power-controlled towards its own eNodeB (full power optionally), landing
  // on one random RC each.
  std::vector<double> interference_mw(static_cast<std::size_t>(n_rcs), 0.0);
  const double cell_radius = cfg_.inter_site_distance_m / 2.0;
  for (int k = 0; k < cfg_.interferer_count; ++k) {
    const double angle_center = 6.283185307179586 * static_cast<double>(k % 6) / 6.0;
    const double cx = cfg_.inter_site_distance_m * std::cos(angle_center);
    const double cy = cfg_.inter_site_distance_m * std::sin(angle_center);
    const double r = cell_radius * std::sqrt(fading_rng->next_double());
    const double th = fading_rng->uniform(0.0, 6.283185307179586);
    const double ix = cx + r * std::cos(th);
    const double iy = cy + r * std::sin(th);

    double tx_dbm = cfg_.p_max_dbm;
    if (!cfg_.interferers_full_power) {
      const double own_d = std::max(1.0, r);
      tx_dbm = tx_power_dbm(pathloss_db(own_d, cfg_), cfg_.n_prb_per_rc, cfg_);
    }
    const double victim_d = std::max(1.0, std::hypot(ix, iy));
    const double rx_dbm = tx_dbm - pathloss_db(victim_d, cfg_);
    const int rc = static_cast<int>(fading_rng->uniform_int(0, n_rcs - 1));
    interference_mw[static_cast<std::size_t>(rc)] += dbm_to_mw(rx_dbm);
  }

  const double noise_mw = dbm_to_mw(noise_dbm_per_rc_);
  for (int i = 0; i < n_ues; ++i) {
    const double loss = total_loss_db_[static_cast<std::size_t>(i)];
    const double tx = tx_power_dbm(loss, cfg_.n_prb_per_rc, cfg_);
    const double rx_dbm = tx - loss;
    for (int j = 0; j < n_rcs; ++j) {
      // block fading: one Rayleigh power draw per (UE, RC) per TTI
      double gain = fading_rng->exponential(1.0);
      if (gain < 1e-12) gain = 1e-12;
      const double fading_db = 10.0 * std::log10(gain);
      const double denom_dbm = mw_to_dbm(noise_mw + interference_mw[static_cast<std::size_t>(j)]);
      const double sinr = rx_dbm + fading_db - denom_dbm;
      ls.sinr_db[static_cast<std::size_t>(i * n_rcs + j)] = sinr;
      ls.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          bytes_per_rc(sinr, table_);
    }
  }
  return ls;
}

}  // namespace woin
