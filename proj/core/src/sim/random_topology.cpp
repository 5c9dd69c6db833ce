#include "nin/sim/random_topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace nin::sim {

TopologyGraph random_connected_topology(const RandomTopologyOptions& options, Rng& rng) {
  const std::size_t n = options.nodes;
  TopologyGraph graph;
  for (std::size_t i = 0; i < n; ++i) {
    graph.add_node(NodeRef{static_cast<std::uint32_t>(i)});
  }
  if (n < 2) {
    return graph;
  }
  // Shuffle so tree hubs are not always the low node numbers.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.below(i + 1)]);
  }
  auto latency = [&] { return rng.between(options.min_latency_ms, options.max_latency_ms); };
  for (std::size_t i = 1; i < n; ++i) {
    const std::uint32_t parent = order[rng.below(i)];
    graph.add_link(NodeRef{order[i]}, NodeRef{parent}, latency());
  }
  const std::size_t max_links = n * (n - 1) / 2;
  const auto wanted = std::min<std::size_t>(
      max_links, static_cast<std::size_t>(std::llround(options.mean_degree * static_cast<double>(n) / 2.0)));
  while (graph.links().size() < wanted) {
    const auto a = static_cast<std::uint32_t>(rng.below(n));
    const auto b = static_cast<std::uint32_t>(rng.below(n));
    if (a != b && !graph.has_link(NodeRef{a}, NodeRef{b})) {
      graph.add_link(NodeRef{a}, NodeRef{b}, latency());
    }
  }
  return graph;
}

}  // namespace nin::sim
