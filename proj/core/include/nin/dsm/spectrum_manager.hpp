#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nin/dsm/allocation.hpp"
#include "nin/dsm/spectrum.hpp"
#include "nin/sim/types.hpp"

namespace nin::dsm {

class InvalidRequirement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class SessionStatus { Live, Failed, Deregistered };
std::string_view to_string(SessionStatus status);

struct Session {
  SubnetRequirement requirement;
  sim::VirtualTime last_heartbeat = 0;
  SessionStatus status = SessionStatus::Live;
  /// Band last handed to the subnet (grant or push).
  SpectrumBand band;
};

/// A band change some live subnet must be told about.
struct Push {
  sim::SubnetId subnet;
  std::uint64_t version = 0;
  SpectrumBand band;
  bool operator==(const Push&) const = default;
};

struct Grant {
  std::uint64_t version = 0;
  SpectrumBand band;
  std::uint16_t requested_mhz = 0;
  /// Other subnets whose band moved.
  std::vector<Push> pushes;
};

struct FailureReport {
  std::vector<sim::SubnetId> failed;
  std::vector<Push> pushes;
};

/// Session bookkeeping and allocation. No I/O; SmService wires it to the
/// network.
class SpectrumManager {
 public:
  explicit SpectrumManager(SpectrumBand total = kDemoBand, sim::VirtualTime heartbeat_period_ms = 1000,
                           std::uint32_t timeout_periods = 3);

  /// New or repeated registration. An identical requirement from a Live
  /// session is answered from the current plan without a recompute.
  Grant register_subnet(const SubnetRequirement& requirement, sim::VirtualTime now);
  /// False when the subnet has no Live session.
  bool on_heartbeat(sim::SubnetId subnet, sim::VirtualTime now);
  /// Live sessions silent for more than timeout_periods heartbeat periods
  /// become Failed, with one recompute for the whole batch.
  FailureReport detect_failures(sim::VirtualTime now);
  std::vector<Push> mark_failed(sim::SubnetId subnet, sim::VirtualTime now);
  std::vector<Push> deregister(sim::SubnetId subnet, sim::VirtualTime now);

  const AllocationPlan& plan() const { return plan_; }
  const std::map<sim::SubnetId, Session>& sessions() const { return sessions_; }
  std::uint64_t recomputes() const { return recomputes_; }
  sim::VirtualTime heartbeat_timeout() const { return heartbeat_period_ * timeout_periods_; }
  /// Continue version numbering after a restart.
  void resume_versions_after(std::uint64_t version);

 private:
  std::vector<Push> recompute(sim::VirtualTime now, std::optional<sim::SubnetId> except);
  std::vector<SubnetRequirement> live_requirements() const;

  SpectrumBand total_;
  sim::VirtualTime heartbeat_period_;
  std::uint32_t timeout_periods_;
  std::map<sim::SubnetId, Session> sessions_;
  AllocationPlan plan_;
  std::uint64_t recomputes_ = 0;
};

}  // namespace nin::dsm
