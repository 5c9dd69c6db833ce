#include "nin/sim/topology.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace nin::sim {

void TopologyGraph::add_node(NodeRef node) {
  if (!nodes_.emplace(node, Status::Up).second) {
    throw TopologyError(fmt::format("duplicate node {}", node.value));
  }
  adjacency_[node];
}

void TopologyGraph::add_link(NodeRef a, NodeRef b, VirtualTime latency_ms) {
  if (a == b) {
    throw TopologyError(fmt::format("self-loop on node {}", a.value));
  }
  if (!has_node(a) || !has_node(b)) {
    throw TopologyError(fmt::format("link {}-{} references an unknown node", a.value, b.value));
  }
  if (latency_ms <= 0) {
    throw TopologyError(fmt::format("link {}-{} latency must be > 0", a.value, b.value));
  }
  if (!links_.emplace(LinkRef::make(a, b), Link{latency_ms, Status::Up}).second) {
    throw TopologyError(fmt::format("duplicate link {}-{}", a.value, b.value));
  }
  auto insert_sorted = [](std::vector<NodeRef>& v, NodeRef n) {
    v.insert(std::upper_bound(v.begin(), v.end(), n), n);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

bool TopologyGraph::node_up(NodeRef node) const {
  auto it = nodes_.find(node);
  return it != nodes_.end() && it->second == Status::Up;
}

void TopologyGraph::set_node_state(NodeRef node, Status state) {
  auto it = nodes_.find(node);
  if (it == nodes_.end()) {
    throw TopologyError(fmt::format("unknown node {}", node.value));
  }
  it->second = state;
}

void TopologyGraph::set_link_state(NodeRef a, NodeRef b, Status state) {
  auto it = links_.find(LinkRef::make(a, b));
  if (it == links_.end()) {
    throw TopologyError(fmt::format("unknown link {}-{}", a.value, b.value));
  }
  it->second.state = state;
}

bool TopologyGraph::link_usable(NodeRef a, NodeRef b) const {
  auto it = links_.find(LinkRef::make(a, b));
  return it != links_.end() && it->second.state == Status::Up && node_up(a) && node_up(b);
}

std::optional<VirtualTime> TopologyGraph::latency(NodeRef a, NodeRef b) const {
  auto it = links_.find(LinkRef::make(a, b));
  if (it == links_.end()) {
    return std::nullopt;
  }
  return it->second.latency_ms;
}

std::vector<NodeRef> TopologyGraph::live_neighbors(NodeRef node) const {
  std::vector<NodeRef> out;
  if (!node_up(node)) {
    return out;
  }
  for (NodeRef n : neighbors(node)) {
    if (link_usable(node, n)) {
      out.push_back(n);
    }
  }
  return out;
}

const std::vector<NodeRef>& TopologyGraph::neighbors(NodeRef node) const {
  static const std::vector<NodeRef> kEmpty;
  auto it = adjacency_.find(node);
  return it == adjacency_.end() ? kEmpty : it->second;
}

std::vector<NodeRef> TopologyGraph::live_nodes() const {
  std::vector<NodeRef> out;
  for (const auto& [node, state] : nodes_) {
    if (state == Status::Up) {
      out.push_back(node);
    }
  }
  return out;
}

bool TopologyGraph::operator==(const TopologyGraph& other) const {
  if (nodes_ != other.nodes_ || links_.size() != other.links_.size()) {
    return false;
  }
  return std::equal(links_.begin(), links_.end(), other.links_.begin(), [](const auto& x, const auto& y) {
    return x.first == y.first && x.second.latency_ms == y.second.latency_ms && x.second.state == y.second.state;
  });
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent_[std::max(a, b)] = std::min(a, b);
    }
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<NodeRef>> connected_components(const TopologyGraph& graph) {
  const std::vector<NodeRef> live = graph.live_nodes();
  std::map<NodeRef, std::size_t> index;
  for (std::size_t i = 0; i < live.size(); ++i) {
    index[live[i]] = i;
  }
  DisjointSets sets(live.size());
  for (const auto& [link, state] : graph.links()) {
    if (graph.link_usable(link.a, link.b)) {
      sets.unite(index.at(link.a), index.at(link.b));
    }
  }
  // Roots are the smallest index in each set, so iterating in order keeps
  // components ordered by their smallest member.
  std::map<std::size_t, std::vector<NodeRef>> groups;
  for (std::size_t i = 0; i < live.size(); ++i) {
    groups[sets.find(i)].push_back(live[i]);
  }
  std::vector<std::vector<NodeRef>> out;
  out.reserve(groups.size());
  for (auto& [root, members] : groups) {
    out.push_back(std::move(members));
  }
  return out;
}

}  // namespace nin::sim
