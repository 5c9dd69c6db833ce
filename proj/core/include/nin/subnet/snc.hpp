#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "nin/dsm/spectrum.hpp"
#include "nin/kira/dht.hpp"
#include "nin/sim/types.hpp"

namespace nin::subnet {

enum class SncPhase { Discovering, Registering, Configured, Degraded, Off };
std::string_view to_string(SncPhase phase);

struct SncConfig {
  sim::VirtualTime heartbeat_period_ms = 1000;
  sim::VirtualTime discover_backoff_ms = 500;
  sim::VirtualTime discover_backoff_cap_ms = 4000;
  sim::VirtualTime register_timeout_ms = 1000;
  std::uint32_t register_attempts = 3;
  /// Consecutive undeliverable heartbeats before the SM counts as lost.
  std::uint32_t missed_heartbeats = 3;
};

namespace action {
/// Resolve the SM name in the DHT and report back via on_lookup.
struct Lookup {};
struct SendRegister {
  kira::DhtValue sm;
  dsm::SubnetRequirement requirement;
};
struct SendHeartbeat {
  kira::DhtValue sm;
  std::uint64_t version = 0;
};
struct SendAck {
  kira::DhtValue sm;
  std::uint64_t version = 0;
};
/// Hand the band to the token MAC.
struct ApplyBand {
  dsm::SpectrumBand band;
  std::uint64_t version = 0;
};
}  // namespace action

using SncAction =
    std::variant<action::Lookup, action::SendRegister, action::SendHeartbeat, action::SendAck, action::ApplyBand>;

/// Controller state machine. Pure: inputs come in through the on_* calls
/// and tick(), effects go out as actions for the host to carry out.
class Snc {
 public:
  explicit Snc(dsm::SubnetRequirement requirement, SncConfig config = {});

  SncPhase phase() const { return phase_; }
  std::uint64_t version() const { return version_; }
  const dsm::SpectrumBand& band() const { return band_; }
  sim::VirtualTime backoff() const { return backoff_; }
  const std::optional<kira::DhtValue>& sm() const { return sm_; }
  const dsm::SubnetRequirement& requirement() const { return requirement_; }
  const SncConfig& config() const { return config_; }

  std::vector<SncAction> power_on(sim::VirtualTime now);
  void power_off();

  /// Fires whatever timer is due.
  std::vector<SncAction> tick(sim::VirtualTime now);
  std::vector<SncAction> on_lookup(const std::optional<kira::DhtRecord>& found, sim::VirtualTime now);
  std::vector<SncAction> on_grant(std::uint64_t version, const dsm::SpectrumBand& band, sim::VirtualTime now);
  std::vector<SncAction> on_reconfigure(std::uint64_t version, const dsm::SpectrumBand& band, sim::VirtualTime now);
  std::vector<SncAction> on_heartbeat_outcome(bool delivered, sim::VirtualTime now);
  std::vector<SncAction> on_reregister(sim::VirtualTime now);

 private:
  static constexpr sim::VirtualTime kNever = INT64_MAX;

  void discover(sim::VirtualTime now);
  std::vector<SncAction> start_registering(sim::VirtualTime now);
  std::vector<SncAction> accept(std::uint64_t version, const dsm::SpectrumBand& band);

  dsm::SubnetRequirement requirement_;
  SncConfig config_;
  SncPhase phase_ = SncPhase::Off;
  std::uint64_t version_ = 0;
  dsm::SpectrumBand band_;
  bool holds_grant_ = false;
  sim::VirtualTime backoff_ = 0;
  std::optional<kira::DhtValue> sm_;
  sim::VirtualTime next_due_ = kNever;
  std::uint32_t register_tries_ = 0;
  std::uint32_t missed_ = 0;
};

}  // namespace nin::subnet
