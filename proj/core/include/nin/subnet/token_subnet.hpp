#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "nin/dsm/spectrum.hpp"
#include "nin/subnet/traffic.hpp"

namespace nin::subnet {

/// Simulation time of the MAC, nanoseconds since run start.
using Nanos = std::int64_t;

struct TokenSubnetConfig {
  std::int64_t token_period_us = 250;
  std::size_t queue_bound = 1024;
  /// Per-frame records older than this are pruned.
  std::int64_t retention_us = 5'000'000;
};

struct TxRecord {
  std::size_t device = 0;
  Nanos start = 0;
  Nanos end = 0;
  std::uint32_t bits = 0;
  Nanos generated = 0;
  bool late = false;

  Nanos latency() const { return start - generated; }
};

struct DropRecord {
  std::size_t device = 0;
  Nanos at = 0;
};

struct DeviceCounters {
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::size_t queued = 0;
};

struct BandChange {
  Nanos effective = 0;
  dsm::SpectrumBand band;
};

/// Token ring over a fixed device order. Each rotation the holder sends
/// queued frames against a deficit counter fed with an equal share of the
/// rotation's airtime budget (capacity * token period). Transmissions are
/// back to back, so at most one device is on air at any instant; a rotation
/// starts at its nominal time or when the previous one finished, whichever
/// is later.
class TokenSubnet {
 public:
  explicit TokenSubnet(std::vector<Device> devices, TokenSubnetConfig config = {});

  const std::vector<Device>& devices() const { return devices_; }
  const TokenSubnetConfig& config() const { return config_; }

  bool powered() const { return powered_; }
  void power_on(Nanos at);
  /// Runs up to `at`, then drops whatever is still queued.
  void power_off(Nanos at);

  /// Runs every rotation that starts before t.
  void advance_to(Nanos t);
  /// Runs up to `at` and schedules the band for the next rotation
  /// boundary, which is returned.
  Nanos set_band(const dsm::SpectrumBand& band, Nanos at);

  const dsm::SpectrumBand& band() const { return band_; }
  Nanos simulated_until() const { return clock_; }
  std::uint64_t rotations() const { return rotations_; }

  const DeviceCounters& counters(std::size_t device) const { return counters_.at(device); }
  DeviceCounters totals() const;

  const std::deque<TxRecord>& transmissions() const { return tx_; }
  const std::deque<DropRecord>& drops() const { return drops_; }
  const std::vector<BandChange>& band_changes() const { return changes_; }
  /// Widest band in effect at any point of [from, to).
  std::uint16_t max_width_between(Nanos from, Nanos to) const;

 private:
  struct Frame {
    Nanos generated;
    std::uint32_t bits;
  };
  struct DeviceState {
    std::deque<Frame> queue;
    Nanos next_generation = 0;
    std::uint64_t deficit = 0;
  };

  void rotate();
  void generate(std::size_t device, Nanos upto);
  void drop(std::size_t device, Nanos at);
  void prune();
  void apply_band(const dsm::SpectrumBand& band, Nanos at);

  std::vector<Device> devices_;
  TokenSubnetConfig config_;
  std::vector<DeviceState> state_;
  std::vector<DeviceCounters> counters_;
  std::uint32_t max_frame_bits_ = 0;

  bool powered_ = false;
  dsm::SpectrumBand band_;
  std::optional<dsm::SpectrumBand> pending_band_;
  Nanos clock_ = 0;
  Nanos nominal_ = 0;
  Nanos next_rotation_ = 0;
  std::uint64_t rotations_ = 0;

  std::deque<TxRecord> tx_;
  std::deque<DropRecord> drops_;
  std::vector<BandChange> changes_;
};

}  // namespace nin::subnet
