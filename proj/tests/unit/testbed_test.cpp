#include <gtest/gtest.h>

#include <regex>

#include "fixtures.hpp"

using namespace nin;
using sim::NodeRef;
using sim::SubnetId;

namespace {

std::vector<sim::LogRecord> records(const testbed::Testbed& tb, std::string_view event) {
  std::vector<sim::LogRecord> out;
  for (const auto& r : tb.kernel().log().records()) {
    if (r.event == event) out.push_back(r);
  }
  return out;
}

std::uint64_t width(const testbed::Testbed& tb, std::uint16_t id) {
  return fixture::width_of(tb.sm().manager().plan(), id);
}

}  // namespace

TEST(Testbed, DemoRegistersEachSubnetOnce) {
  testbed::Testbed tb(fixture::demo());
  tb.start();
  tb.run_until(60'000);
  const auto regs = records(tb, "REGISTER");
  ASSERT_EQ(regs.size(), 2u);
  EXPECT_NE(regs[0].details.find("subnet=1"), std::string::npos);
  EXPECT_NE(regs[1].details.find("subnet=2"), std::string::npos);
  EXPECT_EQ(width(tb, 1), 40u);
  EXPECT_EQ(width(tb, 2), 60u);
  EXPECT_TRUE(tb.violations().empty());
  for (const auto& [id, s] : tb.subnets()) {
    EXPECT_EQ(s->snc.phase(), subnet::SncPhase::Configured);
    EXPECT_EQ(s->mac.band(), tb.sm().manager().plan().assignments.at(id));
  }
  // KPI rows every second for both cells.
  EXPECT_GE(tb.metrics().size(), 2u * 55);
}

TEST(Testbed, FreshSncConfiguresWithinThreeSeconds) {
  auto sc = fixture::demo();
  sc.events.push_back({0, sim::EventKind::SubnetPowerOff, SubnetId{2}});
  sc.events.push_back({10'000, sim::EventKind::SubnetPowerOn, SubnetId{2}});
  testbed::Testbed tb(sc);
  tb.start();
  tb.run_until(9'999);
  EXPECT_EQ(width(tb, 1), 100u);
  EXPECT_EQ(tb.subnet(SubnetId{2})->snc.phase(), subnet::SncPhase::Off);
  tb.run_until(13'000);
  EXPECT_EQ(tb.subnet(SubnetId{2})->snc.phase(), subnet::SncPhase::Configured);
  EXPECT_EQ(width(tb, 2), 60u);
}

TEST(Testbed, MasterNodeDownExhaustsPushesAndReassigns) {
  auto sc = fixture::demo();
  // SN-1's master goes down; SN-2 must end up with everything.
  sc.events.push_back({12'000, sim::EventKind::NodeDown, NodeRef{3}});
  testbed::Testbed tb(sc);
  tb.start();
  tb.run_until(20'000);
  EXPECT_EQ(width(tb, 1), 0u);
  EXPECT_EQ(width(tb, 2), 100u);
  EXPECT_EQ(tb.sm().manager().sessions().at(SubnetId{1}).status, dsm::SessionStatus::Failed);
  EXPECT_FALSE(records(tb, "SUBNET_FAILED").empty());
  EXPECT_EQ(tb.subnet(SubnetId{2})->snc.band().width(), 100);
}

TEST(Testbed, SmRestartBumpsRecordAndResumes) {
  auto sc = fixture::demo();
  sc.events.push_back({10'000, sim::EventKind::NodeDown, NodeRef{0}});
  sc.events.push_back({12'000, sim::EventKind::NodeUp, NodeRef{0}});
  testbed::Testbed tb(sc);
  tb.start();
  tb.run_until(9'000);
  const auto record_v = tb.sm().record_version();
  const auto plan_v = tb.sm().manager().plan().version;
  const auto old_id = tb.kira().id_of(NodeRef{0});
  tb.run_until(40'000);
  EXPECT_TRUE(tb.sm().online());
  EXPECT_GT(tb.sm().record_version(), record_v);
  EXPECT_GT(tb.sm().manager().plan().version, plan_v);
  EXPECT_NE(tb.kira().id_of(NodeRef{0}), old_id);
  const auto found = tb.kira().dht_get(NodeRef{5}, dsm::kSmKey);
  ASSERT_TRUE(found);
  EXPECT_EQ(found->value.node, tb.kira().id_of(NodeRef{0}));
  EXPECT_EQ(width(tb, 1), 40u);
  EXPECT_EQ(width(tb, 2), 60u);
  for (const auto& [id, s] : tb.subnets()) EXPECT_EQ(s->snc.phase(), subnet::SncPhase::Configured);
  EXPECT_TRUE(tb.violations().empty());
}

TEST(Testbed, WalkthroughKeepsInvariantsAndVersionsClimb) {
  testbed::Testbed tb(fixture::walkthrough());
  tb.start();
  tb.run_until(60'000);
  EXPECT_TRUE(tb.violations().empty());
  const std::regex v(R"(^v=(\d+))");
  std::uint64_t last = 0;
  for (const auto& r : records(tb, "PLAN")) {
    std::smatch m;
    ASSERT_TRUE(std::regex_search(r.details, m, v)) << r.details;
    const auto version = std::stoull(m[1]);
    EXPECT_GT(version, last);
    last = version;
  }
}

TEST(Testbed, SameSeedSameLog) {
  auto run = [](std::uint64_t seed) {
    auto sc = fixture::random_scenario(seed);
    sc.events.push_back({6'000, sim::EventKind::SubnetPowerOff, SubnetId{2}});
    testbed::Testbed tb(sc);
    tb.start();
    tb.run_until(12'000);
    return tb.kernel().log().text();
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}
