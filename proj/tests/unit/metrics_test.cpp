#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

#include "nin/subnet/metrics.hpp"
#include "nin/subnet/traffic.hpp"
#include "nin/sim/rng.hpp"

using namespace nin::subnet;

TEST(Metrics, ConstantSamples) {
  const std::vector<double> xs(500, 100.0);
  EXPECT_EQ(nearest_rank(xs, 50), 100.0);
  EXPECT_EQ(nearest_rank(xs, 99), 100.0);
  EXPECT_EQ(population_stddev(xs), 0.0);
}

TEST(Metrics, PercentilesMatchCountingOracle) {
  nin::sim::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> xs(static_cast<std::size_t>(rng.between(1, 300)));
    for (auto& x : xs) x = static_cast<double>(rng.between(0, 50));
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    for (double p : {1.0, 50.0, 90.0, 99.0, 100.0}) {
      EXPECT_EQ(nearest_rank(sorted, p), oracle::percentile(xs, p)) << "n=" << xs.size() << " p=" << p;
    }
  }
}

TEST(Metrics, StddevIsPopulationForm) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(population_stddev(xs), 2.0);
  EXPECT_EQ(nearest_rank({}, 50), 0.0);
}

TEST(Metrics, EmptyWindowThrows) {
  TokenSubnet s(cnc_devices());
  EXPECT_THROW(collect_metrics(s, 10, 10), std::invalid_argument);
  EXPECT_THROW(collect_metrics(s, 10, 5), std::invalid_argument);
}

TEST(Metrics, AlignedCncTrafficHasZeroLatency) {
  // Each device's frames appear exactly on rotation starts and go first.
  std::vector<Device> one{cnc_devices().front()};
  TokenSubnet s(one);
  s.set_band({3700, 3740}, 0);
  s.power_on(0);
  s.advance_to(2'000'000'000);
  const auto m = collect_metrics(s, 1'000'000'000, 2'000'000'000);
  EXPECT_EQ(m.frames_delivered, 1000u);
  EXPECT_EQ(m.latency_p50_us, 0.0);
  EXPECT_EQ(m.latency_p99_us, 0.0);
  EXPECT_EQ(m.jitter_us, 0.0);
  EXPECT_FALSE(m.no_data);
}

TEST(Metrics, CsvRow) {
  SubnetMetrics m;
  m.throughput_mbps = 4.096;
  EXPECT_EQ(metrics_csv_header(), "t,subnet,width_mhz,throughput_mbps,p50_us,p99_us,jitter_us,miss_ratio,dropped");
  EXPECT_EQ(metrics_csv_row(1000, 1, 40, m).rfind("1000,1,40,4.096,", 0), 0u);
}
