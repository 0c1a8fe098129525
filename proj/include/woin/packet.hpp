// The byte-sized traffic unit that travels UE -> eNodeB -> ONU -> OLT.
#pragma once

#include <cstdint>

#include "woin/time_types.hpp"

namespace woin {

enum class PacketClass : int { kVoice = 0, kVideo = 1, kData = 2 };
enum class SlaMark : int { kSla = 0, kAsla = 1 };

struct Packet {
  std::uint64_t id = 0;
  int source_ue = -1;            // -1 for background sources
  std::int32_t size = 0;         // bytes, >= 1
  std::int64_t value_per_byte = 0;  // price units; base price or learned level
  SlaMark sla_mark = SlaMark::kSla;
  PacketClass pkt_class = PacketClass::kData;
  Microseconds gen_time = 0;
  Microseconds deadline = 0;     // absolute; dropped wherever it is exceeded
};

}  // namespace woin
