#pragma once

#include <cstdint>
#include <map>
#include <string_view>

#include "nin/dsm/spectrum_manager.hpp"
#include "nin/dsm/wire.hpp"
#include "nin/kira/network.hpp"

namespace nin::dsm {

inline constexpr std::uint16_t kSmPort = 1;
inline constexpr std::string_view kSmKey = "dynamic-spectrum-manager";

struct SmServiceConfig {
  sim::VirtualTime heartbeat_period_ms = 1000;
  std::uint32_t timeout_periods = 3;
  sim::VirtualTime failure_check_ms = 100;
  sim::VirtualTime push_retry_ms = 500;
  std::uint32_t push_retries = 2;
  sim::VirtualTime bootstrap_backoff_ms = 1000;
  sim::VirtualTime bootstrap_backoff_cap_ms = 8000;
  std::uint32_t record_ttl_s = 30;
};

/// Spectrum Manager process on its host node: publishes itself under
/// kSmKey, serves REGISTER/HEARTBEAT/ACK/DEREGISTER and pushes
/// RECONFIGURE with retries. Restarts with the host; sessions are lost but
/// plan and record versions keep counting up.
class SmService {
 public:
  SmService(kira::KiraNetwork& net, sim::NodeRef host, SmServiceConfig config = {});
  SmService(const SmService&) = delete;
  SmService& operator=(const SmService&) = delete;

  /// Bootstrap now (if the host is up) and keep running.
  void start();

  sim::NodeRef host() const { return host_; }
  bool online() const { return online_; }
  bool published() const { return published_; }
  std::uint64_t record_version() const { return record_version_; }
  const SpectrumManager& manager() const { return manager_; }
  std::size_t pending_pushes() const { return pending_.size(); }

 private:
  struct Address {
    kira::NodeId node;
    std::uint16_t port = 0;
    auto operator<=>(const Address&) const = default;
  };
  struct Pending {
    std::uint64_t version = 0;
    SpectrumBand band;
    std::uint32_t attempts = 0;
  };

  void boot();
  void halt();
  void try_publish(sim::VirtualTime backoff);
  void failure_check();
  void on_message(const kira::ControlMessage& message);
  void send(const Address& to, const wire::Message& message);
  void push(const std::vector<Push>& pushes);
  void transmit(sim::SubnetId subnet);
  void retry(sim::SubnetId subnet, std::uint64_t version);
  void log_plan();
  void emit(std::string event, std::string details);

  kira::KiraNetwork& net_;
  sim::Kernel& kernel_;
  sim::NodeRef host_;
  SmServiceConfig config_;
  SpectrumManager manager_;
  std::map<sim::SubnetId, Address> addresses_;
  std::map<sim::SubnetId, Pending> pending_;
  bool started_ = false;
  bool online_ = false;
  bool published_ = false;
  std::uint64_t record_version_ = 0;
  /// Bumped on every halt so timers of a previous incarnation fizzle.
  std::uint64_t epoch_ = 0;
};

}  // namespace nin::dsm
