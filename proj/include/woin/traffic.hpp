// Traffic sources: two-state Markov ON/OFF UE sources, Poisson background
// sources, and PPP placement of UEs in the cell disc.
#pragma once

#include <cstdint>
#include <vector>

#include "woin/config.hpp"
#include "woin/packet.hpp"
#include "woin/rng.hpp"
#include "woin/time_types.hpp"

namespace woin {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

// ON/OFF source with exponential sojourns; emits one payload-sized packet at
// the end of every full packet_interval spent in ON.
class VoipSource {
 public:
  VoipSource() = default;
  VoipSource(const UeGroupConfig& cfg, RngStream* rng, Microseconds start_time);

  // Emits the packets of (now - dt, now]; caller stamps ids/prices/deadlines.
  // Only size/gen_time/pkt_class are filled in.
  std::vector<Packet> step(Microseconds now, Microseconds dt);

  bool on() const { return on_; }
  std::int32_t payload_bytes() const { return payload_bytes_; }

 private:
  void enter(bool on, Microseconds at);
  Microseconds sojourn(double mean_us);

  RngStream* rng_ = nullptr;
  double mean_on_us_ = 0.0;
  double mean_off_us_ = 0.0;
  Microseconds packet_interval_us_ = 0;
  std::int32_t payload_bytes_ = 0;
  PacketClass pkt_class_ = PacketClass::kVoice;
  bool on_ = false;
  Microseconds state_until_ = 0;  // next sojourn boundary
  Microseconds next_emit_ = 0;    // valid while ON
};

// Poisson arrivals with uniform sizes; SLA marking by a token bucket filled
// at sla_fraction of the offered rate.
class BackgroundSource {
 public:
  BackgroundSource() = default;
  BackgroundSource(const BackgroundConfig& cfg, RngStream* rng);

  // Packets arriving in (now - dt, now], with size, gen_time, sla_mark and
  // value_per_byte filled in (base price for SLA bytes, asla_price above).
  std::vector<Packet> step(Microseconds now, Microseconds dt, std::int64_t base_price);

  double offered_bytes_per_s() const { return cfg_.offered_bytes_per_s; }

 private:
  BackgroundConfig cfg_;
  RngStream* rng_ = nullptr;
  double mean_size_ = 0.0;
  double arrival_clock_ = -1.0;  // exact arrival epoch in us
  double sla_credit_ = 0.0;
  Microseconds credit_at_ = 0;
};

// PPP with the given intensity over a disc: count ~ Poisson(intensity*area),
// positions uniform. Intensity in UEs/km^2, radius in metres.
std::vector<Position> place_ues(RngStream* rng, double intensity_per_km2, double radius_m);

// Uniform placement of a fixed number of UEs in the disc.
std::vector<Position> place_ues_fixed(RngStream* rng, int count, double radius_m,
                                      double min_distance_m);

}  // namespace woin
