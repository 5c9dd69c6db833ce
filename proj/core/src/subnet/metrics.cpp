#include "nin/subnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace nin::subnet {

double nearest_rank(std::span<const double> sorted, double percent) {
  if (sorted.empty()) return 0;
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double population_stddev(std::span<const double> samples) {
  if (samples.empty()) return 0;
  double mean = 0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double var = 0;
  for (double x : samples) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(samples.size()));
}

SubnetMetrics collect_metrics(const TokenSubnet& subnet, Nanos from, Nanos to) {
  if (to <= from) {
    throw std::invalid_argument(fmt::format("metrics window [{}, {}) is empty", from, to));
  }
  SubnetMetrics m;
  std::vector<double> latencies;
  double bits = 0;
  std::uint64_t deadline_delivered = 0;
  std::uint64_t late = 0;
  std::uint64_t deadline_dropped = 0;
  const auto& devices = subnet.devices();

  for (const TxRecord& tx : subnet.transmissions()) {
    const Nanos lo = std::max(tx.start, from);
    const Nanos hi = std::min(tx.end, to);
    if (hi > lo) {
      bits += static_cast<double>(tx.bits) * static_cast<double>(hi - lo) / static_cast<double>(tx.end - tx.start);
    }
    if (tx.start < from || tx.start >= to) continue;
    latencies.push_back(static_cast<double>(tx.latency()) / 1000.0);
    if (devices[tx.device].profile.deadline_us) {
      ++deadline_delivered;
      if (tx.late) ++late;
    }
  }
  for (const DropRecord& d : subnet.drops()) {
    if (d.at < from || d.at >= to) continue;
    ++m.frames_dropped;
    if (devices[d.device].profile.deadline_us) ++deadline_dropped;
  }

  m.frames_delivered = latencies.size();
  m.no_data = latencies.empty();
  m.throughput_mbps = bits / (static_cast<double>(to - from) / 1000.0);
  std::sort(latencies.begin(), latencies.end());
  m.latency_p50_us = nearest_rank(latencies, 50);
  m.latency_p99_us = nearest_rank(latencies, 99);
  m.jitter_us = population_stddev(latencies);
  if (deadline_delivered + deadline_dropped > 0) {
    m.deadline_miss_ratio =
        static_cast<double>(late + deadline_dropped) / static_cast<double>(deadline_delivered + deadline_dropped);
  }
  return m;
}

std::string metrics_csv_header() {
  return "t,subnet,width_mhz,throughput_mbps,p50_us,p99_us,jitter_us,miss_ratio,dropped";
}

std::string metrics_csv_row(std::int64_t t_ms, std::uint16_t subnet, std::uint16_t width_mhz,
                            const SubnetMetrics& m) {
  return fmt::format("{},{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.6f},{}", t_ms, subnet, width_mhz, m.throughput_mbps,
                     m.latency_p50_us, m.latency_p99_us, m.jitter_us, m.deadline_miss_ratio, m.frames_dropped);
}

}  // namespace nin::subnet
