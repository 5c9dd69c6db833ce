#include <gtest/gtest.h>

#include "oracles.hpp"

#include "nin/dsm/allocation.hpp"
#include "nin/sim/rng.hpp"

using namespace nin::dsm;
using nin::sim::SubnetId;

namespace {

SubnetRequirement req(std::uint16_t id, std::uint16_t mhz, std::uint32_t prio, Qos q = Qos::Urllc) {
  return {SubnetId{id}, q, mhz, prio};
}

std::map<std::uint16_t, SpectrumBand> bands_of(const AllocationPlan& p) {
  std::map<std::uint16_t, SpectrumBand> out;
  for (const auto& [id, b] : p.assignments) out[id.value] = b;
  return out;
}

}  // namespace

TEST(Allocation, CncAloneGetsEverything) {
  const std::vector live{req(1, 40, 0)};
  const auto p = compute_allocation(live);
  EXPECT_EQ(p.assignments.at(SubnetId{1}), (SpectrumBand{3700, 3800}));
}

TEST(Allocation, BothRunningIsFortySixty) {
  const std::vector live{req(1, 40, 0), req(2, 60, 1, Qos::Embb)};
  const auto p = compute_allocation(live);
  EXPECT_EQ(p.assignments.at(SubnetId{1}), (SpectrumBand{3700, 3740}));
  EXPECT_EQ(p.assignments.at(SubnetId{2}), (SpectrumBand{3740, 3800}));
}

TEST(Allocation, SensorAloneGetsEverything) {
  const std::vector live{req(2, 60, 1, Qos::Embb)};
  EXPECT_EQ(compute_allocation(live).assignments.at(SubnetId{2}).width(), 100);
}

TEST(Allocation, NobodyLiveIsEmpty) {
  EXPECT_TRUE(compute_allocation({}).assignments.empty());
  EXPECT_TRUE(plan_violations(compute_allocation({}), {}).empty());
}

TEST(Allocation, OversubscriptionTruncatesLowerPriority) {
  const std::vector live{req(1, 80, 0), req(2, 80, 1)};
  const auto p = compute_allocation(live);
  EXPECT_EQ(p.assignments.at(SubnetId{1}).width(), 80);
  EXPECT_EQ(p.assignments.at(SubnetId{2}).width(), 20);
  EXPECT_TRUE(plan_violations(p, live).empty());
}

TEST(Allocation, LeftoverSplitsByLargestRemainder) {
  // 70 MHz left over split 10:10:10 -> 23.33 each, one extra to the lowest id.
  const std::vector live{req(3, 10, 0), req(1, 10, 0), req(2, 10, 0)};
  const auto shares = allocation_shares(live, 100);
  ASSERT_EQ(shares.size(), 3u);
  EXPECT_EQ(shares[0].subnet, SubnetId{1});
  EXPECT_EQ(shares[0].reserved + shares[0].expansion, 34);
  EXPECT_EQ(shares[1].reserved + shares[1].expansion, 33);
  EXPECT_EQ(shares[2].reserved + shares[2].expansion, 33);
}

TEST(Allocation, PlacementFollowsPriorityThenId) {
  const std::vector live{req(5, 10, 0), req(2, 10, 3), req(9, 10, 0)};
  const auto p = compute_allocation(live);
  EXPECT_EQ(p.assignments.at(SubnetId{5}).low_mhz, 3700);
  EXPECT_EQ(p.assignments.at(SubnetId{9}).low_mhz, p.assignments.at(SubnetId{5}).high_mhz);
  EXPECT_EQ(p.assignments.at(SubnetId{2}).high_mhz, 3800);
}

TEST(Allocation, ViolationsAreDetected) {
  const std::vector live{req(1, 40, 0), req(2, 60, 1)};
  AllocationPlan p;
  p.assignments[SubnetId{1}] = {3700, 3750};
  p.assignments[SubnetId{2}] = {3740, 3800};
  EXPECT_FALSE(plan_violations(p, live).empty());
  p.assignments[SubnetId{2}] = {3750, 3790};
  EXPECT_FALSE(plan_violations(p, live).empty());
  p.assignments[SubnetId{2}] = {3750, 3810};
  EXPECT_FALSE(plan_violations(p, live).empty());
  // Priority monotonicity: 1 short while 2 holds spectrum.
  p.assignments[SubnetId{1}] = {3700, 3730};
  p.assignments[SubnetId{2}] = {3730, 3800};
  EXPECT_FALSE(plan_violations(p, live).empty());
  EXPECT_FALSE(oracle::validate_plan(bands_of(p), {{1, 40, 0}, {2, 60, 1}}).empty());
}

TEST(Allocation, RandomSetsAgreeWithOracles) {
  nin::sim::Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto n = rng.between(1, 8);
    std::vector<SubnetRequirement> live;
    std::vector<oracle::Req> reqs;
    std::set<std::uint16_t> used;
    while (static_cast<std::int64_t>(live.size()) < n) {
      const auto id = static_cast<std::uint16_t>(rng.between(1, 500));
      if (!used.insert(id).second) continue;
      live.push_back(req(id, static_cast<std::uint16_t>(rng.between(1, 100)), static_cast<std::uint32_t>(rng.below(4))));
      reqs.push_back({id, live.back().requested_mhz, live.back().priority});
    }
    const auto p = compute_allocation(live);
    ASSERT_EQ(oracle::validate_plan(bands_of(p), reqs), "") << "set " << i;
    ASSERT_TRUE(plan_violations(p, live).empty());
    for (const auto& [id, w] : oracle::expected_widths(reqs, 100)) {
      ASSERT_EQ(p.assignments.at(SubnetId{id}).width(), w) << "set " << i << " subnet " << id;
    }
    // Input order does not matter.
    std::reverse(live.begin(), live.end());
    ASSERT_EQ(compute_allocation(live), p);
  }
}
