#include "nin/dsm/spectrum_manager.hpp"

#include <fmt/format.h>

namespace nin::dsm {

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Live: return "Live";
    case SessionStatus::Failed: return "Failed";
    case SessionStatus::Deregistered: return "Deregistered";
  }
  return "?";
}

SpectrumManager::SpectrumManager(SpectrumBand total, sim::VirtualTime heartbeat_period_ms,
                                 std::uint32_t timeout_periods)
    : total_(total), heartbeat_period_(heartbeat_period_ms), timeout_periods_(timeout_periods) {}

void SpectrumManager::resume_versions_after(std::uint64_t version) {
  if (version > plan_.version) plan_.version = version;
}

std::vector<SubnetRequirement> SpectrumManager::live_requirements() const {
  std::vector<SubnetRequirement> live;
  for (const auto& [id, s] : sessions_) {
    if (s.status == SessionStatus::Live) live.push_back(s.requirement);
  }
  return live;
}

std::vector<Push> SpectrumManager::recompute(sim::VirtualTime now, std::optional<sim::SubnetId> except) {
  const auto live = live_requirements();
  AllocationPlan next = compute_allocation(live, total_);
  next.version = plan_.version + 1;
  next.computed_at = now;
  plan_ = std::move(next);
  ++recomputes_;

  std::vector<Push> pushes;
  for (auto& [id, s] : sessions_) {
    if (s.status != SessionStatus::Live) {
      s.band = {};
      continue;
    }
    const SpectrumBand band = plan_.assignments.at(id);
    if (band == s.band) continue;
    s.band = band;
    if (id != except) pushes.push_back({id, plan_.version, band});
  }
  return pushes;
}

Grant SpectrumManager::register_subnet(const SubnetRequirement& req, sim::VirtualTime now) {
  if (req.requested_mhz == 0 || req.requested_mhz > total_.width()) {
    throw InvalidRequirement(fmt::format("subnet {} requested {} MHz", req.subnet.value, req.requested_mhz));
  }
  auto it = sessions_.find(req.subnet);
  if (it != sessions_.end() && it->second.status == SessionStatus::Live && it->second.requirement == req) {
    it->second.last_heartbeat = now;
    return Grant{plan_.version, it->second.band, req.requested_mhz, {}};
  }
  Session& s = sessions_[req.subnet];
  s.requirement = req;
  s.last_heartbeat = now;
  s.status = SessionStatus::Live;
  s.band = {};
  Grant g;
  g.pushes = recompute(now, req.subnet);
  g.version = plan_.version;
  g.band = s.band;
  g.requested_mhz = req.requested_mhz;
  return g;
}

bool SpectrumManager::on_heartbeat(sim::SubnetId subnet, sim::VirtualTime now) {
  auto it = sessions_.find(subnet);
  if (it == sessions_.end() || it->second.status != SessionStatus::Live) return false;
  it->second.last_heartbeat = now;
  return true;
}

FailureReport SpectrumManager::detect_failures(sim::VirtualTime now) {
  FailureReport r;
  for (auto& [id, s] : sessions_) {
    if (s.status == SessionStatus::Live && now - s.last_heartbeat > heartbeat_timeout()) {
      s.status = SessionStatus::Failed;
      r.failed.push_back(id);
    }
  }
  if (!r.failed.empty()) r.pushes = recompute(now, std::nullopt);
  return r;
}

std::vector<Push> SpectrumManager::mark_failed(sim::SubnetId subnet, sim::VirtualTime now) {
  auto it = sessions_.find(subnet);
  if (it == sessions_.end() || it->second.status != SessionStatus::Live) return {};
  it->second.status = SessionStatus::Failed;
  return recompute(now, std::nullopt);
}

std::vector<Push> SpectrumManager::deregister(sim::SubnetId subnet, sim::VirtualTime now) {
  auto it = sessions_.find(subnet);
  if (it == sessions_.end() || it->second.status != SessionStatus::Live) return {};
  it->second.status = SessionStatus::Deregistered;
  return recompute(now, std::nullopt);
}

}  // namespace nin::dsm
