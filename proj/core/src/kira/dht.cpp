#include "nin/kira/dht.hpp"

namespace nin::kira {

DhtStore::StoreResult DhtStore::store(const DhtRecord& record, sim::VirtualTime now) {
  auto it = records_.find(record.key);
  if (it == records_.end()) {
    records_.emplace(record.key, Stored{record, now});
    return StoreResult::Stored;
  }
  Stored& held = it->second;
  if (!expired(held, now) && held.record.version > record.version) {
    return StoreResult::Stale;
  }
  const bool refresh = !expired(held, now) && held.record.version == record.version;
  held = Stored{record, now};
  return refresh ? StoreResult::Refreshed : StoreResult::Stored;
}

std::optional<DhtRecord> DhtStore::lookup(std::string_view key, sim::VirtualTime now) const {
  auto it = records_.find(key);
  if (it == records_.end() || expired(it->second, now)) {
    return std::nullopt;
  }
  return it->second.record;
}

std::size_t DhtStore::purge_expired(sim::VirtualTime now) {
  std::size_t n = 0;
  for (auto it = records_.begin(); it != records_.end();) {
    if (expired(it->second, now)) {
      it = records_.erase(it);
      ++n;
    } else {
      ++it;
    }
  }
  return n;
}

}  // namespace nin::kira
