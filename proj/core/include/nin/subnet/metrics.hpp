#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nin/subnet/token_subnet.hpp"

namespace nin::subnet {

struct SubnetMetrics {
  double throughput_mbps = 0;
  double latency_p50_us = 0;
  double latency_p99_us = 0;
  /// Population standard deviation of the latency samples.
  double jitter_us = 0;
  /// (late + dropped) / (delivered + dropped), deadline traffic only.
  double deadline_miss_ratio = 0;
  std::uint64_t frames_dropped = 0;
  std::uint64_t frames_delivered = 0;
  /// No frame was transmitted in the window.
  bool no_data = true;
};

/// Nearest-rank percentile of an ascending sample; 0 for an empty one.
double nearest_rank(std::span<const double> sorted, double percent);
double population_stddev(std::span<const double> samples);

/// KPIs over [from, to). Throughput counts each frame's bits in proportion
/// to the part of its airtime inside the window. Throws
/// std::invalid_argument when the window is empty.
SubnetMetrics collect_metrics(const TokenSubnet& subnet, Nanos from, Nanos to);

std::string metrics_csv_header();
std::string metrics_csv_row(std::int64_t t_ms, std::uint16_t subnet, std::uint16_t width_mhz,
                            const SubnetMetrics& m);

}  // namespace nin::subnet
