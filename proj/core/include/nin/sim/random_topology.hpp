#pragma once

#include <cstddef>

#include "nin/sim/rng.hpp"
#include "nin/sim/topology.hpp"

namespace nin::sim {

struct RandomTopologyOptions {
  std::size_t nodes = 32;
  double mean_degree = 3.0;
  VirtualTime min_latency_ms = 1;
  VirtualTime max_latency_ms = 10;
};

/// Connected graph on nodes 0..n-1: a random spanning tree plus random
/// extra links until the requested mean degree is reached.
TopologyGraph random_connected_topology(const RandomTopologyOptions& options, Rng& rng);

}  // namespace nin::sim
