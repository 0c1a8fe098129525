// Single-run entry point: wires traffic, radio, eNodeB scheduling, learning,
// ONU queues and the OLT DBA onto one event queue and runs it to completion.
#pragma once

#include "woin/config.hpp"
#include "woin/metrics.hpp"

namespace woin {

// Throws std::invalid_argument listing every validation problem when the
// config is rejected. Identical (config, seed) yields an identical report.
RunMetrics run_simulation(const RunConfig& cfg);

}  // namespace woin
