#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nin/sim/types.hpp"

namespace nin::sim {

class TopologyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unordered node pair, stored with a < b.
struct LinkRef {
  NodeRef a;
  NodeRef b;

  static LinkRef make(NodeRef x, NodeRef y) { return x < y ? LinkRef{x, y} : LinkRef{y, x}; }
  constexpr auto operator<=>(const LinkRef&) const = default;
};

struct Link {
  VirtualTime latency_ms = 1;
  Status state = Status::Up;
};

/// Backbone graph. A Down node keeps its incident links' own state, but
/// none of them is usable until the node is Up again.
class TopologyGraph {
 public:
  void add_node(NodeRef node);
  void add_link(NodeRef a, NodeRef b, VirtualTime latency_ms);

  bool has_node(NodeRef node) const { return nodes_.contains(node); }
  bool has_link(NodeRef a, NodeRef b) const { return links_.contains(LinkRef::make(a, b)); }
  bool node_up(NodeRef node) const;

  void set_node_state(NodeRef node, Status state);
  void set_link_state(NodeRef a, NodeRef b, Status state);

  /// Link Up and both endpoints Up.
  bool link_usable(NodeRef a, NodeRef b) const;
  std::optional<VirtualTime> latency(NodeRef a, NodeRef b) const;

  /// Neighbors reachable over usable links, ascending.
  std::vector<NodeRef> live_neighbors(NodeRef node) const;
  /// All configured neighbors regardless of state, ascending.
  const std::vector<NodeRef>& neighbors(NodeRef node) const;

  const std::map<NodeRef, Status>& nodes() const { return nodes_; }
  const std::map<LinkRef, Link>& links() const { return links_; }
  std::vector<NodeRef> live_nodes() const;
  std::size_t node_count() const { return nodes_.size(); }

  bool operator==(const TopologyGraph&) const;

 private:
  std::map<NodeRef, Status> nodes_;
  std::map<LinkRef, Link> links_;
  std::map<NodeRef, std::vector<NodeRef>> adjacency_;
};

/// Partition of the live nodes into components over usable links. Each
/// component is sorted and components are ordered by their smallest node.
std::vector<std::vector<NodeRef>> connected_components(const TopologyGraph& graph);

}  // namespace nin::sim
