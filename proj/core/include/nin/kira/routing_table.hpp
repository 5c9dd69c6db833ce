#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "nin/kira/node_id.hpp"
#include "nin/sim/types.hpp"

namespace nin::kira {

struct Contact {
  NodeId target;
  sim::NodeRef next_hop;
  std::uint32_t hops = 1;
  /// Origin stamp of the newest advertisement of `target` seen so far.
  sim::VirtualTime freshness = 0;
  /// Local time at which that stamp arrived; staleness is measured from it.
  sim::VirtualTime refreshed_at = 0;

  bool operator==(const Contact&) const = default;
};

enum class OfferResult {
  Inserted,   ///< new target
  Replaced,   ///< route (next hop or hops) changed
  Refreshed,  ///< same route, newer stamp
  Ignored,    ///< not better than what is stored, or tombstoned
  BucketFull,
};

/// Bucket i holds contacts sharing exactly i leading bits with the owner.
/// A contact is better than another for the same target when its stamp is
/// newer, or the stamps are equal and it has fewer hops.
class RoutingTable {
 public:
  static constexpr std::size_t kDefaultBucketCapacity = 64;

  explicit RoutingTable(NodeId owner, std::size_t bucket_capacity = kDefaultBucketCapacity);

  const NodeId& owner() const { return owner_; }
  std::size_t bucket_capacity() const { return capacity_; }
  std::size_t bucket_index(const NodeId& target) const { return shared_prefix_length(owner_, target); }

  OfferResult offer(const Contact& candidate);

  /// Neighbor `via` reports its route to `target` broken as of `stamp`.
  /// Only a contact that routes through `via` and is older than the report
  /// is dropped; the target is then tombstoned up to `stamp`. Returns true
  /// when a contact was removed.
  bool withdraw(const NodeId& target, sim::VirtualTime stamp, sim::NodeRef via, sim::VirtualTime now);

  /// Removes matching contacts and returns them.
  std::vector<Contact> remove_if(const std::function<bool(const Contact&)>& predicate);

  const Contact* find(const NodeId& target) const;
  const std::vector<Contact>& bucket(std::size_t index) const { return buckets_.at(index); }
  /// All contacts, by bucket then target.
  std::vector<Contact> contacts() const;
  std::size_t size() const;

  /// Highest withdrawn stamp per target still remembered.
  const std::map<NodeId, sim::VirtualTime>& tombstones() const { return tombstones_; }
  std::optional<sim::VirtualTime> tombstone(const NodeId& target) const;
  void add_tombstone(const NodeId& target, sim::VirtualTime stamp, sim::VirtualTime now);
  /// Forgets tombstones recorded before `cutoff`.
  void expire_tombstones(sim::VirtualTime cutoff);

 private:
  static bool better(const Contact& a, const Contact& b) {
    return a.freshness > b.freshness || (a.freshness == b.freshness && a.hops < b.hops);
  }

  NodeId owner_;
  std::size_t capacity_;
  std::array<std::vector<Contact>, kIdBits> buckets_;
  std::map<NodeId, sim::VirtualTime> tombstones_;
  std::map<NodeId, sim::VirtualTime> tombstoned_at_;
};

}  // namespace nin::kira
