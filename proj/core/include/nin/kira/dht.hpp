#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nin/kira/node_id.hpp"
#include "nin/sim/types.hpp"

namespace nin::kira {

/// Name binding payload: the node address plus an application port.
struct DhtValue {
  NodeId node;
  std::uint16_t port = 0;

  bool operator==(const DhtValue&) const = default;
};

struct DhtRecord {
  std::string key;
  DhtValue value;
  std::uint32_t ttl_s = 30;
  /// Per key per publisher; a higher version replaces a lower one.
  std::uint64_t version = 1;

  bool operator==(const DhtRecord&) const = default;
};

/// Records held by one replica node.
class DhtStore {
 public:
  enum class StoreResult { Stored, Refreshed, Stale };

  StoreResult store(const DhtRecord& record, sim::VirtualTime now);
  /// Unexpired record for key, if any. A record is expired once its age
  /// exceeds ttl_s.
  std::optional<DhtRecord> lookup(std::string_view key, sim::VirtualTime now) const;
  std::size_t purge_expired(sim::VirtualTime now);
  void clear() { records_.clear(); }
  std::size_t size() const { return records_.size(); }

 private:
  struct Stored {
    DhtRecord record;
    sim::VirtualTime stored_at = 0;
  };
  static bool expired(const Stored& s, sim::VirtualTime now) {
    return now - s.stored_at > static_cast<sim::VirtualTime>(s.record.ttl_s) * 1000;
  }

  std::map<std::string, Stored, std::less<>> records_;
};

struct PutResult {
  std::vector<NodeId> replicas;
  bool ok() const { return !replicas.empty(); }
};

}  // namespace nin::kira
