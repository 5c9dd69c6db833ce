#pragma once

// Scenario and overlay builders shared by unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "nin/kira/network.hpp"
#include "nin/sim/kernel.hpp"
#include "nin/sim/random_topology.hpp"
#include "nin/sim/rng.hpp"
#include "nin/sim/scenario.hpp"
#include "nin/testbed/testbed.hpp"

namespace fixture {

using namespace nin;

inline std::filesystem::path scenario_path(const std::string& name) {
  return std::filesystem::path(NIN_SCENARIO_DIR) / name;
}

inline sim::Scenario demo() { return sim::load_scenario_file(scenario_path("demo.yaml")); }
inline sim::Scenario walkthrough() { return sim::load_scenario_file(scenario_path("walkthrough.yaml")); }

/// Connected graph with 16..64 nodes picked from the seed.
inline sim::TopologyGraph random_graph(std::uint64_t seed, std::size_t min_nodes = 16, std::size_t max_nodes = 64) {
  sim::Rng rng(seed);
  sim::RandomTopologyOptions opt;
  opt.nodes = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(min_nodes),
                                                   static_cast<std::int64_t>(max_nodes)));
  return sim::random_connected_topology(opt, rng);
}

/// Random backbone with the SM and two subnets on distinct random nodes.
inline sim::Scenario random_scenario(std::uint64_t seed) {
  sim::Scenario s;
  s.topology = random_graph(seed);
  s.seed = seed;
  sim::Rng rng(seed ^ 0x5eedULL);
  const auto n = s.topology.node_count();
  std::vector<std::uint32_t> picks;
  while (picks.size() < 3) {
    const auto v = static_cast<std::uint32_t>(rng.below(n));
    if (std::find(picks.begin(), picks.end(), v) == picks.end()) picks.push_back(v);
  }
  s.sm_host = sim::NodeRef{picks[0]};
  s.attachments[sim::SubnetId{1}] = sim::NodeRef{picks[1]};
  s.attachments[sim::SubnetId{2}] = sim::NodeRef{picks[2]};
  return s;
}

/// Kernel plus overlay on a fixed graph.
struct Overlay {
  sim::Kernel kernel;
  kira::KiraNetwork net;

  Overlay(sim::TopologyGraph g, std::uint64_t seed, kira::KiraConfig cfg = {})
      : kernel(std::move(g), seed), net(kernel, cfg) {
    net.start();
  }

  /// Runs gossip until a full round passes without change. Returns false
  /// when that did not happen by `limit_ms`.
  bool converge(sim::VirtualTime limit_ms = 120'000) {
    const auto period = net.config().gossip_period_ms;
    while (kernel.now() < limit_ms) {
      kernel.run_until(kernel.now() + period);
      if (net.converged()) return true;
    }
    return false;
  }
};

inline std::uint64_t width_of(const dsm::AllocationPlan& plan, std::uint16_t subnet) {
  auto it = plan.assignments.find(sim::SubnetId{subnet});
  return it == plan.assignments.end() ? 0 : it->second.width();
}

}  // namespace fixture
