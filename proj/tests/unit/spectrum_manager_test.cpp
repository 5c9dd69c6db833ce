#include <gtest/gtest.h>

#include "nin/dsm/spectrum_manager.hpp"

using namespace nin::dsm;
using nin::sim::SubnetId;

namespace {

const SubnetRequirement kCnc{SubnetId{1}, Qos::Urllc, 40, 0};
const SubnetRequirement kSensor{SubnetId{2}, Qos::Embb, 60, 1};

}  // namespace

TEST(SpectrumManager, RegistrationSequenceMatchesTheDemo) {
  SpectrumManager sm;
  const auto g1 = sm.register_subnet(kCnc, 0);
  EXPECT_EQ(g1.band.width(), 100);
  EXPECT_TRUE(g1.pushes.empty());
  const auto g2 = sm.register_subnet(kSensor, 10);
  EXPECT_EQ(g2.band, (SpectrumBand{3740, 3800}));
  ASSERT_EQ(g2.pushes.size(), 1u);
  EXPECT_EQ(g2.pushes[0].subnet, SubnetId{1});
  EXPECT_EQ(g2.pushes[0].band, (SpectrumBand{3700, 3740}));
  EXPECT_EQ(g2.version, g1.version + 1);
}

TEST(SpectrumManager, RejectsZeroWidthAndOversizedRequests) {
  SpectrumManager sm;
  EXPECT_THROW(sm.register_subnet({SubnetId{3}, Qos::Urllc, 0, 0}, 0), InvalidRequirement);
  EXPECT_THROW(sm.register_subnet({SubnetId{3}, Qos::Urllc, 101, 0}, 0), InvalidRequirement);
  EXPECT_TRUE(sm.sessions().empty());
}

TEST(SpectrumManager, IdenticalReRegistrationDoesNotRecompute) {
  SpectrumManager sm;
  sm.register_subnet(kCnc, 0);
  const auto n = sm.recomputes();
  const auto v = sm.plan().version;
  const auto g = sm.register_subnet(kCnc, 5);
  EXPECT_EQ(sm.recomputes(), n);
  EXPECT_EQ(g.version, v);
  // A changed requirement is an update.
  auto bigger = kCnc;
  bigger.requested_mhz = 50;
  sm.register_subnet(bigger, 6);
  EXPECT_EQ(sm.plan().version, v + 1);
}

TEST(SpectrumManager, FailureNeedsStrictlyMoreThanThreePeriods) {
  SpectrumManager sm;
  sm.register_subnet(kCnc, 0);
  sm.register_subnet(kSensor, 0);
  sm.on_heartbeat(SubnetId{1}, 3000);
  EXPECT_TRUE(sm.detect_failures(3000).failed.empty());
  const auto r = sm.detect_failures(3001);
  ASSERT_EQ(r.failed, std::vector<SubnetId>{SubnetId{2}});
  ASSERT_EQ(r.pushes.size(), 1u);
  EXPECT_EQ(r.pushes[0].band.width(), 100);
  EXPECT_EQ(sm.sessions().at(SubnetId{2}).status, SessionStatus::Failed);
  // Exactly once per transition.
  const auto recomputes = sm.recomputes();
  EXPECT_TRUE(sm.detect_failures(9000).failed.size() == 1u);  // SN-1 silent since 3000
  EXPECT_TRUE(sm.detect_failures(9000).failed.empty());
  EXPECT_EQ(sm.recomputes(), recomputes + 1);
  EXPECT_FALSE(sm.on_heartbeat(SubnetId{2}, 9001));
}

TEST(SpectrumManager, CncFailureHandsSensorEverything) {
  SpectrumManager sm;
  sm.register_subnet(kCnc, 0);
  sm.register_subnet(kSensor, 0);
  const auto pushes = sm.mark_failed(SubnetId{1}, 100);
  ASSERT_EQ(pushes.size(), 1u);
  EXPECT_EQ(pushes[0].subnet, SubnetId{2});
  EXPECT_EQ(pushes[0].band, (SpectrumBand{3700, 3800}));
}

TEST(SpectrumManager, DeregisterAndReturn) {
  SpectrumManager sm;
  sm.register_subnet(kCnc, 0);
  sm.register_subnet(kSensor, 0);
  sm.deregister(SubnetId{2}, 10);
  EXPECT_EQ(sm.plan().assignments.size(), 1u);
  const auto g = sm.register_subnet(kSensor, 20);
  EXPECT_EQ(g.band.width(), 60);
  EXPECT_EQ(sm.sessions().at(SubnetId{2}).status, SessionStatus::Live);
}

TEST(SpectrumManager, VersionsResumeAfterRestart) {
  SpectrumManager sm;
  sm.resume_versions_after(41);
  EXPECT_EQ(sm.register_subnet(kCnc, 0).version, 42u);
}
