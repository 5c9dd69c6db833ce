#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nin/kira/dht.hpp"
#include "nin/kira/message.hpp"
#include "nin/kira/node_id.hpp"
#include "nin/kira/routing_table.hpp"
#include "nin/sim/kernel.hpp"

namespace nin::kira {

struct KiraConfig {
  std::size_t bucket_capacity = RoutingTable::kDefaultBucketCapacity;
  std::size_t replicas = 2;
  sim::VirtualTime gossip_period_ms = 500;
  /// Contacts not refreshed for this many periods are evicted.
  std::uint32_t stale_periods = 3;
  std::uint32_t max_hops = 64;
  std::size_t lookup_parallelism = 3;
  /// Contacts returned per lookup query.
  std::size_t lookup_width = 8;
  sim::VirtualTime dht_maintenance_period_ms = 1000;
};

enum class DropReason { TtlExceeded, NoRoute, NodeDownMidPath, SourceDown };
std::string_view to_string(DropReason reason);

/// One forwarding decision: at `at`, the contact for `via` was chosen.
struct HopProgress {
  sim::NodeRef at;
  NodeId via;
  Distance distance;  ///< via ^ dst
  std::uint32_t contact_hops = 0;
};

struct Delivered {
  /// Nodes visited after the source, ending at the destination.
  std::vector<sim::NodeRef> path;
  std::vector<HopProgress> progress;
};

struct Dropped {
  DropReason reason;
  std::vector<sim::NodeRef> path;
};

using RouteResult = std::variant<Delivered, Dropped>;

struct NextHop {
  enum class Kind { Local, Forward, NoRoute };
  Kind kind = Kind::NoRoute;
  sim::NodeRef node{};
  std::optional<Contact> via;
};

struct TableDelta {
  std::size_t inserted = 0;
  std::size_t replaced = 0;
  std::size_t refreshed = 0;
  std::size_t removed = 0;
  std::size_t malformed = 0;

  bool changed() const { return inserted + replaced + removed > 0; }
  TableDelta& operator+=(const TableDelta& o);
};

struct OutgoingGossip {
  sim::NodeRef to;
  ControlMessage message;
};

/// Overlay for every node of the kernel topology: identities, contact
/// gossip, greedy XOR forwarding and the name-binding DHT.
class KiraNetwork {
 public:
  using PortHandler = std::function<void(sim::NodeRef at, const ControlMessage&)>;
  using OutcomeHandler = std::function<void(const RouteResult&)>;

  explicit KiraNetwork(sim::Kernel& kernel, KiraConfig config = {});
  KiraNetwork(const KiraNetwork&) = delete;
  KiraNetwork& operator=(const KiraNetwork&) = delete;

  /// Schedules the periodic gossip and DHT maintenance from now on.
  void start();

  const KiraConfig& config() const { return config_; }
  sim::Kernel& kernel() { return kernel_; }

  const NodeId& id_of(sim::NodeRef node) const;
  std::optional<sim::NodeRef> ref_of(const NodeId& id) const;
  bool is_up(sim::NodeRef node) const { return kernel_.topology().node_up(node); }
  const RoutingTable& table(sim::NodeRef node) const;
  const DhtStore& store(sim::NodeRef node) const;

  // contact plane
  TableDelta on_hello(sim::NodeRef self, sim::NodeRef neighbor, sim::VirtualTime stamp);
  /// Contact gossip this node sends to each live neighbor right now.
  std::vector<OutgoingGossip> gossip_round(sim::NodeRef self);
  TableDelta receive_gossip(sim::NodeRef self, sim::NodeRef from, const ControlMessage& message);
  /// Drops contacts whose next hop is unusable or that went stale, and
  /// forgets old tombstones.
  TableDelta purge(sim::NodeRef self);

  // forwarding
  NextHop next_hop(sim::NodeRef self, const NodeId& dst) const;
  /// Walks the whole path at the current instant and logs the outcome.
  RouteResult route(const ControlMessage& message);
  /// Forwards hop by hop with link latency; delivers to the bound port.
  void send(ControlMessage message, OutcomeHandler on_outcome = {});
  /// Binding survives reboots of the node.
  void bind(sim::NodeRef node, std::uint16_t port, PortHandler handler);

  // name binding
  PutResult dht_put(sim::NodeRef origin, const DhtRecord& record);
  std::optional<DhtRecord> dht_get(sim::NodeRef origin, std::string_view key);
  /// Put plus periodic republish while the origin stays up: every ttl/2
  /// once the replica set has settled, every maintenance period before.
  /// Only registered when the first put succeeds.
  PutResult publish(sim::NodeRef origin, const DhtRecord& record);
  void unpublish(sim::NodeRef origin, std::string_view key);
  /// Purges expired records and republishes due publications of `node`.
  std::size_t republish_tick(sim::NodeRef node);
  /// Responsive nodes closest to the key, found by iterative lookup.
  std::vector<sim::NodeRef> lookup(sim::NodeRef origin, const NodeId& key);

  // convergence bookkeeping
  std::uint64_t round() const { return round_; }
  std::uint64_t last_change_round() const { return last_change_round_; }
  /// A full round passed without any table change.
  bool converged() const { return round_ >= last_change_round_ + 2; }
  std::size_t malformed_gossip() const { return malformed_; }
  /// One synchronized gossip round across all live nodes.
  void gossip_tick();

 private:
  struct Node {
    NodeId id;
    RoutingTable table;
    DhtStore store;
  };
  struct Publication {
    DhtRecord record;
    sim::VirtualTime next_due = 0;
    std::vector<NodeId> replicas;
  };
  /// ttl/2 once the replica set is full and unchanged, else next maintenance.
  sim::VirtualTime next_republish(const Publication& pub, const PutResult& put) const;
  struct Transit {
    ControlMessage message;
    OutcomeHandler done;
    std::vector<sim::NodeRef> path;
    std::vector<HopProgress> progress;
  };

  enum class StepKind { Deliver, Forward, Drop };
  struct Step {
    StepKind kind;
    sim::NodeRef next{};
    DropReason reason = DropReason::NoRoute;
  };

  void assign_id(sim::NodeRef node);
  void handle_net_event(const sim::NetEvent& event);
  Node& node(sim::NodeRef ref);
  const Node& node(sim::NodeRef ref) const;
  void note(const TableDelta& delta);
  Step step_at(sim::NodeRef at, ControlMessage& message, std::vector<HopProgress>& progress) const;
  RouteResult walk(const ControlMessage& message) const;
  void forward(sim::NodeRef at, std::shared_ptr<Transit> transit);
  void finish(const ControlMessage& message, const RouteResult& result, const OutcomeHandler& done);
  void log_route(const ControlMessage& message, const RouteResult& result);
  bool reachable(sim::NodeRef from, sim::NodeRef to) const;
  void schedule_gossip(sim::VirtualTime at);
  void schedule_maintenance(sim::VirtualTime at);

  sim::Kernel& kernel_;
  KiraConfig config_;
  sim::Rng rng_;
  std::map<sim::NodeRef, Node> nodes_;
  std::map<NodeId, sim::NodeRef> by_id_;
  std::map<std::pair<sim::NodeRef, std::uint16_t>, PortHandler> ports_;
  std::map<std::pair<sim::NodeRef, std::string>, Publication> publications_;
  std::uint64_t round_ = 0;
  std::uint64_t last_change_round_ = 0;
  std::size_t malformed_ = 0;
  bool started_ = false;
};

std::string format_path(const std::vector<sim::NodeRef>& path);

}  // namespace nin::kira
