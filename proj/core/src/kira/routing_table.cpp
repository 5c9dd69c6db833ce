#include "nin/kira/routing_table.hpp"

#include <algorithm>
#include <stdexcept>

namespace nin::kira {

RoutingTable::RoutingTable(NodeId owner, std::size_t bucket_capacity) : owner_(owner), capacity_(bucket_capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("bucket capacity must be > 0");
  }
}

OfferResult RoutingTable::offer(const Contact& candidate) {
  if (candidate.target == owner_ || candidate.hops == 0) {
    return OfferResult::Ignored;
  }
  if (auto tomb = tombstones_.find(candidate.target); tomb != tombstones_.end()) {
    if (candidate.freshness <= tomb->second) {
      return OfferResult::Ignored;
    }
    tombstones_.erase(tomb);
    tombstoned_at_.erase(candidate.target);
  }
  auto& bucket = buckets_[bucket_index(candidate.target)];
  auto it = std::find_if(bucket.begin(), bucket.end(), [&](const Contact& c) { return c.target == candidate.target; });
  if (it != bucket.end()) {
    if (!better(candidate, *it)) {
      return OfferResult::Ignored;
    }
    const bool same_route = it->next_hop == candidate.next_hop && it->hops == candidate.hops;
    *it = candidate;
    return same_route ? OfferResult::Refreshed : OfferResult::Replaced;
  }
  if (bucket.size() < capacity_) {
    bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), candidate,
                                   [](const Contact& a, const Contact& b) { return a.target < b.target; }),
                  candidate);
    return OfferResult::Inserted;
  }
  // Full: the stalest entry (oldest stamp, then most hops, then largest id) goes.
  auto worst = std::min_element(bucket.begin(), bucket.end(), [](const Contact& a, const Contact& b) {
    if (a.freshness != b.freshness) return a.freshness < b.freshness;
    if (a.hops != b.hops) return a.hops > b.hops;
    return a.target > b.target;
  });
  if (!better(candidate, *worst)) {
    return OfferResult::BucketFull;
  }
  bucket.erase(worst);
  bucket.insert(std::upper_bound(bucket.begin(), bucket.end(), candidate,
                                 [](const Contact& a, const Contact& b) { return a.target < b.target; }),
                candidate);
  return OfferResult::Inserted;
}

bool RoutingTable::withdraw(const NodeId& target, sim::VirtualTime stamp, sim::NodeRef via, sim::VirtualTime now) {
  if (target == owner_) {
    return false;
  }
  auto& bucket = buckets_[bucket_index(target)];
  auto it = std::find_if(bucket.begin(), bucket.end(), [&](const Contact& c) { return c.target == target; });
  if (it == bucket.end() || it->next_hop != via || it->freshness >= stamp) {
    return false;
  }
  bucket.erase(it);
  add_tombstone(target, stamp, now);
  return true;
}

std::vector<Contact> RoutingTable::remove_if(const std::function<bool(const Contact&)>& predicate) {
  std::vector<Contact> removed;
  for (auto& bucket : buckets_) {
    auto keep = std::stable_partition(bucket.begin(), bucket.end(), [&](const Contact& c) { return !predicate(c); });
    removed.insert(removed.end(), keep, bucket.end());
    bucket.erase(keep, bucket.end());
  }
  return removed;
}

const Contact* RoutingTable::find(const NodeId& target) const {
  if (target == owner_) {
    return nullptr;
  }
  const auto& bucket = buckets_[bucket_index(target)];
  auto it = std::find_if(bucket.begin(), bucket.end(), [&](const Contact& c) { return c.target == target; });
  return it == bucket.end() ? nullptr : &*it;
}

std::vector<Contact> RoutingTable::contacts() const {
  std::vector<Contact> out;
  for (const auto& bucket : buckets_) {
    out.insert(out.end(), bucket.begin(), bucket.end());
  }
  return out;
}

std::size_t RoutingTable::size() const {
  std::size_t n = 0;
  for (const auto& bucket : buckets_) {
    n += bucket.size();
  }
  return n;
}

std::optional<sim::VirtualTime> RoutingTable::tombstone(const NodeId& target) const {
  auto it = tombstones_.find(target);
  if (it == tombstones_.end()) {
    return std::nullopt;
  }
  return it->second;
}

void RoutingTable::add_tombstone(const NodeId& target, sim::VirtualTime stamp, sim::VirtualTime now) {
  auto [it, inserted] = tombstones_.try_emplace(target, stamp);
  if (inserted || stamp > it->second) {
    it->second = stamp;
    tombstoned_at_[target] = now;
  }
}

void RoutingTable::expire_tombstones(sim::VirtualTime cutoff) {
  for (auto it = tombstoned_at_.begin(); it != tombstoned_at_.end();) {
    if (it->second < cutoff) {
      tombstones_.erase(it->first);
      it = tombstoned_at_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace nin::kira
