#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nin/sim/event_log.hpp"
#include "nin/subnet/metrics.hpp"
#include "nin/testbed/testbed.hpp"

namespace nin::gateway {

struct NodeView {
  std::uint32_t node = 0;
  std::string id;
  bool up = true;
  std::size_t contacts = 0;
};

struct LinkView {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::int64_t latency_ms = 0;
  bool up = true;
};

struct BandView {
  std::uint16_t subnet = 0;
  std::uint16_t low_mhz = 0;
  std::uint16_t high_mhz = 0;
};

struct SubnetView {
  std::uint16_t subnet = 0;
  std::uint32_t master = 0;
  std::string profile;
  bool switched_on = true;
  bool running = false;
  std::string phase;
  std::uint64_t version = 0;
  std::uint16_t low_mhz = 0;
  std::uint16_t high_mhz = 0;
  std::string session;  ///< SM view: Live, Failed, Deregistered or none
  subnet::SubnetMetrics metrics;
};

/// Immutable view of the running system handed to the HTTP side.
struct StateSnapshot {
  std::int64_t t = 0;
  std::vector<NodeView> nodes;
  std::vector<LinkView> links;
  bool converged = false;
  std::uint64_t gossip_round = 0;
  std::uint32_t sm_host = 0;
  bool sm_online = false;
  std::uint64_t plan_version = 0;
  std::vector<BandView> plan;
  std::vector<SubnetView> subnets;
  std::vector<sim::LogRecord> log_tail;
};

StateSnapshot capture(const testbed::Testbed& testbed, std::size_t log_tail = 50);
std::string to_json(const StateSnapshot& snapshot);
std::string to_json(const sim::LogRecord& record);

/// Latest snapshot, swapped whole under a mutex.
class SnapshotCell {
 public:
  void store(StateSnapshot snapshot);
  std::shared_ptr<const StateSnapshot> load() const;
  std::shared_ptr<const std::string> json() const;

 private:
  mutable std::mutex mutex_;
  std::shared_ptr<const StateSnapshot> snapshot_ = std::make_shared<StateSnapshot>();
  std::shared_ptr<const std::string> json_ = std::make_shared<std::string>("{}");
};

}  // namespace nin::gateway
