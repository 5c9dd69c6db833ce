#include "nin/dsm/allocation.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

namespace nin::dsm {

namespace {

bool placed_before(const SubnetRequirement& a, const SubnetRequirement& b) {
  return a.priority != b.priority ? a.priority < b.priority : a.subnet < b.subnet;
}

std::vector<SubnetRequirement> in_order(std::span<const SubnetRequirement> live) {
  std::vector<SubnetRequirement> v(live.begin(), live.end());
  std::sort(v.begin(), v.end(), placed_before);
  return v;
}

}  // namespace

std::uint32_t AllocationPlan::total_width() const {
  std::uint32_t sum = 0;
  for (const auto& [id, band] : assignments) sum += band.width();
  return sum;
}

std::vector<AllocationShare> allocation_shares(std::span<const SubnetRequirement> live, std::uint16_t total_mhz) {
  const auto order = in_order(live);
  std::vector<AllocationShare> shares;
  shares.reserve(order.size());
  std::uint32_t remaining = total_mhz;
  for (const auto& r : order) {
    const auto grant = std::min<std::uint32_t>(r.requested_mhz, remaining);
    remaining -= grant;
    shares.push_back({r.subnet, static_cast<std::uint16_t>(grant), 0});
  }
  const std::uint64_t demand = std::accumulate(order.begin(), order.end(), std::uint64_t{0},
                                               [](std::uint64_t s, const auto& r) { return s + r.requested_mhz; });
  if (remaining == 0 || demand == 0) {
    return shares;
  }
  // Largest remainder over exact quotas leftover * req / demand.
  struct Quota {
    std::size_t index;
    std::uint64_t remainder;
  };
  std::vector<Quota> quotas;
  std::uint32_t handed = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::uint64_t num = std::uint64_t{remaining} * order[i].requested_mhz;
    shares[i].expansion = static_cast<std::uint16_t>(num / demand);
    handed += shares[i].expansion;
    quotas.push_back({i, num % demand});
  }
  std::sort(quotas.begin(), quotas.end(), [&](const Quota& a, const Quota& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return order[a.index].subnet < order[b.index].subnet;
  });
  for (std::size_t k = 0; handed < remaining; ++k, ++handed) {
    ++shares[quotas[k].index].expansion;
  }
  return shares;
}

AllocationPlan compute_allocation(std::span<const SubnetRequirement> live, SpectrumBand total) {
  AllocationPlan plan;
  std::uint16_t cursor = total.low_mhz;
  for (const auto& s : allocation_shares(live, total.width())) {
    const auto width = static_cast<std::uint16_t>(s.reserved + s.expansion);
    plan.assignments[s.subnet] = SpectrumBand{cursor, static_cast<std::uint16_t>(cursor + width)};
    cursor = static_cast<std::uint16_t>(cursor + width);
  }
  return plan;
}

std::vector<std::string> plan_violations(const AllocationPlan& plan, std::span<const SubnetRequirement> live,
                                         SpectrumBand total) {
  std::vector<std::string> out;
  std::map<sim::SubnetId, SubnetRequirement> req;
  for (const auto& r : live) req[r.subnet] = r;

  for (const auto& [id, band] : plan.assignments) {
    if (!req.contains(id)) out.push_back(fmt::format("subnet {} assigned but not live", id.value));
    if (band.low_mhz > band.high_mhz || !band.within(total)) {
      out.push_back(fmt::format("subnet {} band {} outside {}", id.value, band.str(), total.str()));
    }
  }
  for (auto a = plan.assignments.begin(); a != plan.assignments.end(); ++a) {
    for (auto b = std::next(a); b != plan.assignments.end(); ++b) {
      if (a->second.overlaps(b->second)) {
        out.push_back(fmt::format("subnets {} and {} overlap", a->first.value, b->first.value));
      }
    }
  }
  const auto sum = plan.total_width();
  if (sum > total.width()) out.push_back(fmt::format("total {} MHz exceeds {}", sum, total.width()));
  if (!live.empty() && sum != total.width()) {
    out.push_back(fmt::format("total {} MHz leaves spectrum idle with live subnets", sum));
  }
  for (const auto& [id, r] : req) {
    if (!plan.assignments.contains(id)) out.push_back(fmt::format("live subnet {} has no assignment", id.value));
  }
  // An unmet request forbids any width for subnets placed after it.
  const auto order = in_order(live);
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto it = plan.assignments.find(order[i].subnet);
    if (it == plan.assignments.end() || it->second.width() >= order[i].requested_mhz) continue;
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (order[j].priority == order[i].priority) continue;
      auto jt = plan.assignments.find(order[j].subnet);
      if (jt != plan.assignments.end() && jt->second.width() > 0) {
        out.push_back(fmt::format("subnet {} (prio {}) granted while subnet {} (prio {}) is short",
                                  order[j].subnet.value, order[j].priority, order[i].subnet.value,
                                  order[i].priority));
      }
    }
  }
  return out;
}

}  // namespace nin::dsm
