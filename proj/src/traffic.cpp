#include "woin/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace woin {

VoipSource::VoipSource(const UeGroupConfig& cfg, RngStream* rng, Microseconds start_time)
    : rng_(rng),
      mean_on_us_(cfg.mean_on_s * kUsPerSecond),
      mean_off_us_(cfg.mean_off_s * kUsPerSecond),
      packet_interval_us_(cfg.packet_interval_us),
      pkt_class_(cfg.pkt_class) {
  payload_bytes_ = static_cast<std::int32_t>(
      cfg.talkspurt_rate_bps * static_cast<double>(cfg.packet_interval_us) / 8e6);
  if (payload_bytes_ < 1) payload_bytes_ = 1;
  // start in OFF with a fresh sojourn so sources are desynchronized
  on_ = false;
  state_until_ = start_time + sojourn(mean_off_us_);
}

Microseconds VoipSource::sojourn(double mean_us) {
  const auto len = static_cast<Microseconds>(rng_->exponential(mean_us));
  return len > 0 ? len : 1;
}

void VoipSource::enter(bool on, Microseconds at) {
  on_ = on;
  state_until_ = at + sojourn(on ? mean_on_us_ : mean_off_us_);
  if (on) next_emit_ = at + packet_interval_us_;
}

std::vector<Packet> VoipSource::step(Microseconds now, Microseconds dt) {
  if (dt <= 0) throw std::invalid_argument("VoipSource::step: dt must be > 0");
  std::vector<Packet> out;
  Microseconds t = now - dt;
  while (t < now) {
    if (on_) {
      // emit every full interval until the sojourn or the step ends
      while (next_emit_ <= state_until_ && next_emit_ <= now) {
        Packet p;
        p.size = payload_bytes_;
        p.pkt_class = pkt_class_;
        p.gen_time = next_emit_;
        out.push_back(p);
        next_emit_ += packet_interval_us_;
      }
    }
    if (state_until_ > now) break;
    t = state_until_;
    enter(!on_, t);
  }
  return out;
}

BackgroundSource::BackgroundSource(const BackgroundConfig& cfg, RngStream* rng)
    : cfg_(cfg), rng_(rng) {
  mean_size_ = 0.5 * (static_cast<double>(cfg.min_packet_bytes) +
                      static_cast<double>(cfg.max_packet_bytes));
}

std::vector<Packet> BackgroundSource::step(Microseconds now, Microseconds dt,
                                           std::int64_t base_price) {
  if (dt <= 0) throw std::invalid_argument("BackgroundSource::step: dt must be > 0");
  std::vector<Packet> out;
  if (cfg_.offered_bytes_per_s <= 0.0) return out;

  const double pkts_per_us = cfg_.offered_bytes_per_s / mean_size_ / 1e6;
  const double mean_gap_us = 1.0 / pkts_per_us;
  const double sla_rate_bytes_per_us = cfg_.offered_bytes_per_s * cfg_.sla_fraction / 1e6;

  const Microseconds from = now - dt;
  if (arrival_clock_ < static_cast<double>(from)) {  // first call
    arrival_clock_ = static_cast<double>(from) + rng_->exponential(mean_gap_us);
  }
  while (static_cast<Microseconds>(arrival_clock_) <= now) {
    const auto arrival_us = static_cast<Microseconds>(arrival_clock_);
    Packet p;
    p.size = static_cast<std::int32_t>(
        rng_->uniform_int(cfg_.min_packet_bytes, cfg_.max_packet_bytes));
    p.pkt_class = PacketClass::kData;
    p.gen_time = arrival_us;

    // token bucket decides the SLA mark; burst depth of one max-size packet
    sla_credit_ += sla_rate_bytes_per_us * static_cast<double>(arrival_us - credit_at_);
    const double credit_cap = static_cast<double>(cfg_.max_packet_bytes);
    if (sla_credit_ > credit_cap) sla_credit_ = credit_cap;
    credit_at_ = arrival_us;
    if (cfg_.sla_fraction > 0.0 && sla_credit_ >= static_cast<double>(p.size)) {
      sla_credit_ -= static_cast<double>(p.size);
      p.sla_mark = SlaMark::kSla;
      p.value_per_byte = base_price;
    } else {
      p.sla_mark = SlaMark::kAsla;
      p.value_per_byte = cfg_.asla_price;
    }
    out.push_back(p);
    arrival_clock_ += rng_->exponential(mean_gap_us);
  }
  return out;
}

std::vector<Position> place_ues(RngStream* rng, double intensity_per_km2, double radius_m) {
  if (intensity_per_km2 < 0.0) throw std::invalid_argument("place_ues: negative intensity");
  const double area_km2 = 3.141592653589793 * radius_m * radius_m / 1e6;
  const int count = rng->poisson(intensity_per_km2 * area_km2);
  return place_ues_fixed(rng, count, radius_m, 0.0);
}

std::vector<Position> place_ues_fixed(RngStream* rng, int count, double radius_m,
                                      double min_distance_m) {
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // uniform over the disc via sqrt radius sampling
    double r;
    do {
      r = radius_m * std::sqrt(rng->next_double());
    } while (r < min_distance_m);
    const double theta = rng->uniform(0.0, 6.283185307179586);
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

}  // namespace woin
