#include <gtest/gtest.h>

#include "nin/subnet/metrics.hpp"
#include "nin/subnet/token_subnet.hpp"
#include "nin/subnet/traffic.hpp"
#include "nin/sim/rng.hpp"

using namespace nin;
using namespace nin::subnet;

namespace {

constexpr Nanos kMs = 1'000'000;
constexpr Nanos kSec = 1000 * kMs;

void expect_conserved(const TokenSubnet& s) {
  for (std::size_t i = 0; i < s.devices().size(); ++i) {
    const auto& c = s.counters(i);
    EXPECT_EQ(c.generated, c.delivered + c.queued + c.dropped) << "device " << i;
  }
}

}  // namespace

TEST(Capacity, LinearInWidth) {
  EXPECT_EQ(capacity_mbps({3700, 3700}), 0.0);
  EXPECT_EQ(capacity_mbps({3700, 3760}), 240.0);
  EXPECT_EQ(capacity_mbps({3700, 3800}), 400.0);
  EXPECT_EQ(capacity_bits_per_us({3700, 3740}), 160u);
}

TEST(Traffic, DemoDeviceSets) {
  EXPECT_EQ(cnc_devices().size(), 8u);
  EXPECT_EQ(sensor_devices().size(), 4u);
  // 8 x 64 B per ms and 4 x 1500 B per 500 us.
  EXPECT_DOUBLE_EQ(offered_mbps(cnc_devices()), 8 * 512 / 1000.0);
  EXPECT_DOUBLE_EQ(offered_mbps(sensor_devices()), 4 * 12000 / 500.0);
}

TEST(TokenSubnet, ZeroBandQueuesThenDrops) {
  TokenSubnet s(sensor_devices());
  s.power_on(0);
  s.advance_to(2 * kSec);
  const auto m = collect_metrics(s, kSec, 2 * kSec);
  EXPECT_EQ(m.throughput_mbps, 0.0);
  EXPECT_TRUE(m.no_data);
  EXPECT_TRUE(s.transmissions().empty());
  const auto t = s.totals();
  EXPECT_EQ(t.delivered, 0u);
  EXPECT_EQ(t.queued, 4 * s.config().queue_bound);
  EXPECT_GT(t.dropped, 0u);
  expect_conserved(s);
}

TEST(TokenSubnet, CncOnFortyMhzMeetsEveryDeadline) {
  TokenSubnet s(cnc_devices());
  s.set_band({3700, 3740}, 0);
  s.power_on(0);
  s.advance_to(3 * kSec);
  const auto m = collect_metrics(s, kSec, 3 * kSec);
  EXPECT_EQ(m.deadline_miss_ratio, 0.0);
  EXPECT_EQ(m.frames_dropped, 0u);
  EXPECT_NEAR(m.throughput_mbps, 4.096, 1e-9);
  EXPECT_LE(m.latency_p99_us, 1000.0);
  expect_conserved(s);
}

TEST(TokenSubnet, SensorLoadSaturatesTwentyMhz) {
  const dsm::SpectrumBand band{3700, 3720};
  TokenSubnet s(sensor_devices());
  s.set_band(band, 0);
  s.power_on(0);
  s.advance_to(4 * kSec);
  const auto m = collect_metrics(s, 2 * kSec, 4 * kSec);
  EXPECT_NEAR(m.throughput_mbps, capacity_mbps(band), capacity_mbps(band) * 0.01);
  EXPECT_LE(m.throughput_mbps, capacity_mbps(band));
  EXPECT_GT(m.frames_dropped, 0u);
  expect_conserved(s);
}

TEST(TokenSubnet, AtMostOneTransmitterAtAnyInstant) {
  std::vector<Device> mixed = cnc_devices();
  for (auto& d : sensor_devices()) mixed.push_back(d);
  TokenSubnet s(mixed);
  s.set_band({3700, 3730}, 0);
  s.power_on(0);
  s.advance_to(kSec);
  const auto& tx = s.transmissions();
  ASSERT_GT(tx.size(), 1000u);
  for (std::size_t i = 1; i < tx.size(); ++i) {
    ASSERT_LE(tx[i - 1].end, tx[i].start) << "overlap at record " << i;
    ASSERT_LE(tx[i].generated, tx[i].start);
  }
}

TEST(TokenSubnet, BandChangesOnlyAtRotationBoundaries) {
  TokenSubnet s(cnc_devices());
  s.set_band({3700, 3740}, 0);
  s.power_on(0);
  s.advance_to(10 * kMs + 123);
  const auto effective = s.set_band({3700, 3800}, 10 * kMs + 123);
  EXPECT_GE(effective, 10 * kMs + 123);
  EXPECT_EQ(s.band().width(), 40);
  s.advance_to(effective + 1);
  EXPECT_EQ(s.band().width(), 100);
  ASSERT_EQ(s.band_changes().back().effective, effective);
  // No frame straddles the switch.
  for (const auto& t : s.transmissions()) {
    EXPECT_FALSE(t.start < effective && t.end > effective);
  }
  EXPECT_EQ(s.max_width_between(0, effective), 40);
  EXPECT_EQ(s.max_width_between(0, effective + 1), 100);
}

TEST(TokenSubnet, PowerOffFlushesQueues) {
  TokenSubnet s(sensor_devices());
  s.power_on(0);
  s.advance_to(50 * kMs);
  s.power_off(50 * kMs);
  EXPECT_EQ(s.totals().queued, 0u);
  expect_conserved(s);
  const auto before = s.totals().generated;
  s.advance_to(kSec);
  EXPECT_EQ(s.totals().generated, before);
}

TEST(TokenSubnet, ConservationUnderRandomBandChurn) {
  sim::Rng rng(17);
  for (int run = 0; run < 10; ++run) {
    TokenSubnet s(run % 2 ? sensor_devices() : cnc_devices());
    s.power_on(0);
    Nanos t = 0;
    for (int k = 0; k < 40; ++k) {
      t += rng.between(1, 50) * kMs;
      const auto low = static_cast<std::uint16_t>(rng.between(3700, 3800));
      const auto high = static_cast<std::uint16_t>(rng.between(low, 3800));
      if (rng.below(8) == 0) s.power_off(t);
      else if (rng.below(8) == 0) s.power_on(t);
      else s.set_band({low, high}, t);
      expect_conserved(s);
    }
    // Throughput never beats the widest band in the window.
    s.advance_to(t);
    const auto from = std::max<Nanos>(0, t - 500 * kMs);
    const auto m = collect_metrics(s, from, t);
    EXPECT_LE(m.throughput_mbps, s.max_width_between(from, t) * 4.0 + 1e-9);
  }
}
