#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nin/dsm/spectrum.hpp"
#include "nin/sim/types.hpp"

namespace nin::dsm {

struct AllocationPlan {
  std::uint64_t version = 0;
  std::map<sim::SubnetId, SpectrumBand> assignments;
  sim::VirtualTime computed_at = 0;

  std::uint32_t total_width() const;
  bool operator==(const AllocationPlan&) const = default;
};

/// Reserved and expansion share per subnet, in placement order.
struct AllocationShare {
  sim::SubnetId subnet;
  std::uint16_t reserved = 0;
  std::uint16_t expansion = 0;
};

/// Guarantee phase in (priority, id) order, then leftover split in
/// proportion to requested width with largest-remainder rounding (ties to
/// the lower id). Widths are integer MHz.
std::vector<AllocationShare> allocation_shares(std::span<const SubnetRequirement> live,
                                               std::uint16_t total_mhz);

/// Shares placed contiguously from total.low_mhz. Version and computed_at
/// are left for the caller.
AllocationPlan compute_allocation(std::span<const SubnetRequirement> live, SpectrumBand total = kDemoBand);

/// Human-readable invariant violations of `plan` for the given live set;
/// empty when the plan is sound.
std::vector<std::string> plan_violations(const AllocationPlan& plan, std::span<const SubnetRequirement> live,
                                         SpectrumBand total = kDemoBand);

}  // namespace nin::dsm
