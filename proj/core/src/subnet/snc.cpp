#include "nin/subnet/snc.hpp"

#include <algorithm>

namespace nin::subnet {

std::string_view to_string(SncPhase phase) {
  switch (phase) {
    case SncPhase::Discovering: return "Discovering";
    case SncPhase::Registering: return "Registering";
    case SncPhase::Configured: return "Configured";
    case SncPhase::Degraded: return "Degraded";
    case SncPhase::Off: return "Off";
  }
  return "?";
}

Snc::Snc(dsm::SubnetRequirement requirement, SncConfig config) : requirement_(requirement), config_(config) {}

std::vector<SncAction> Snc::power_on(sim::VirtualTime now) {
  if (phase_ != SncPhase::Off) return {};
  phase_ = SncPhase::Discovering;
  backoff_ = config_.discover_backoff_ms;
  holds_grant_ = false;
  band_ = {};
  missed_ = 0;
  next_due_ = now;
  return tick(now);
}

void Snc::power_off() {
  phase_ = SncPhase::Off;
  band_ = {};
  holds_grant_ = false;
  sm_.reset();
  next_due_ = kNever;
}

void Snc::discover(sim::VirtualTime now) {
  phase_ = holds_grant_ ? SncPhase::Degraded : SncPhase::Discovering;
  backoff_ = config_.discover_backoff_ms;
  next_due_ = now;
}

std::vector<SncAction> Snc::start_registering(sim::VirtualTime now) {
  phase_ = SncPhase::Registering;
  register_tries_ = 0;
  next_due_ = now;
  return tick(now);
}

std::vector<SncAction> Snc::tick(sim::VirtualTime now) {
  if (phase_ == SncPhase::Off || now < next_due_) return {};
  switch (phase_) {
    case SncPhase::Discovering:
    case SncPhase::Degraded:
      next_due_ = kNever;  // until on_lookup
      return {action::Lookup{}};
    case SncPhase::Registering:
      if (register_tries_ >= config_.register_attempts) {
        discover(now);
        return tick(now);
      }
      ++register_tries_;
      next_due_ = now + config_.register_timeout_ms;
      return {action::SendRegister{*sm_, requirement_}};
    case SncPhase::Configured:
      next_due_ = now + config_.heartbeat_period_ms;
      return {action::SendHeartbeat{*sm_, version_}};
    case SncPhase::Off: break;
  }
  return {};
}

std::vector<SncAction> Snc::on_lookup(const std::optional<kira::DhtRecord>& found, sim::VirtualTime now) {
  if (phase_ != SncPhase::Discovering && phase_ != SncPhase::Degraded) return {};
  if (!found) {
    next_due_ = now + backoff_;
    backoff_ = std::min(backoff_ * 2, config_.discover_backoff_cap_ms);
    return {};
  }
  sm_ = found->value;
  backoff_ = config_.discover_backoff_ms;
  return start_registering(now);
}

std::vector<SncAction> Snc::accept(std::uint64_t version, const dsm::SpectrumBand& band) {
  version_ = std::max(version_, version);
  band_ = band;
  holds_grant_ = true;
  return {action::ApplyBand{band_, version_}};
}

std::vector<SncAction> Snc::on_grant(std::uint64_t version, const dsm::SpectrumBand& band, sim::VirtualTime now) {
  if (phase_ != SncPhase::Registering) return {};
  std::vector<SncAction> out;
  // A grant trailing a newer RECONFIGURE carries a stale band.
  if (!holds_grant_ || version >= version_) out = accept(version, band);
  phase_ = SncPhase::Configured;
  missed_ = 0;
  next_due_ = now + config_.heartbeat_period_ms;
  return out;
}

std::vector<SncAction> Snc::on_reconfigure(std::uint64_t version, const dsm::SpectrumBand& band,
                                           sim::VirtualTime) {
  if (phase_ == SncPhase::Off || !sm_) return {};
  std::vector<SncAction> out;
  if (version > version_) {
    out = accept(version, band);
  }
  out.push_back(action::SendAck{*sm_, version_});
  return out;
}

std::vector<SncAction> Snc::on_heartbeat_outcome(bool delivered, sim::VirtualTime now) {
  if (phase_ != SncPhase::Configured) return {};
  if (delivered) {
    missed_ = 0;
    return {};
  }
  if (++missed_ < config_.missed_heartbeats) return {};
  missed_ = 0;
  discover(now);
  return tick(now);
}

std::vector<SncAction> Snc::on_reregister(sim::VirtualTime now) {
  if (phase_ != SncPhase::Configured && phase_ != SncPhase::Degraded) return {};
  if (!sm_) return {};
  return start_registering(now);
}

}  // namespace nin::subnet
