#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nin/sim/types.hpp"

namespace nin::dsm {

/// Closed interval [low_mhz, high_mhz]; width 0 is the empty band.
struct SpectrumBand {
  std::uint16_t low_mhz = 0;
  std::uint16_t high_mhz = 0;

  std::uint16_t width() const { return static_cast<std::uint16_t>(high_mhz - low_mhz); }
  bool empty() const { return high_mhz == low_mhz; }
  bool within(const SpectrumBand& outer) const { return outer.low_mhz <= low_mhz && high_mhz <= outer.high_mhz; }
  /// Interiors intersect.
  bool overlaps(const SpectrumBand& o) const { return low_mhz < o.high_mhz && o.low_mhz < high_mhz; }
  std::string str() const;

  bool operator==(const SpectrumBand&) const = default;
};

/// 3700-3800 MHz.
inline constexpr SpectrumBand kDemoBand{3700, 3800};

enum class Qos : std::uint8_t { Urllc = 0, Embb = 1 };
std::string_view to_string(Qos qos);
std::optional<Qos> parse_qos(std::string_view text);

struct SubnetRequirement {
  sim::SubnetId subnet;
  Qos qos = Qos::Urllc;
  std::uint16_t requested_mhz = 0;
  /// Lower is more important.
  std::uint32_t priority = 0;

  bool operator==(const SubnetRequirement&) const = default;
};

}  // namespace nin::dsm
