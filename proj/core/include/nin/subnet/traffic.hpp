#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nin/dsm/spectrum.hpp"

namespace nin::subnet {

/// Bits per second per Hz of granted spectrum.
inline constexpr std::uint32_t kSpectralEfficiency = 4;

/// Linear PHY model: width_mhz * 4 Mbit/s.
double capacity_mbps(const dsm::SpectrumBand& band);
/// Same, in bits per microsecond (exact integer).
std::uint64_t capacity_bits_per_us(const dsm::SpectrumBand& band);

enum class TrafficKind { CncControl, SensorTelemetry };
enum class DeviceRole { Actuator, Sensor, Controller };

std::string_view to_string(TrafficKind kind);
std::string_view to_string(DeviceRole role);

struct TrafficProfile {
  TrafficKind kind = TrafficKind::CncControl;
  std::uint32_t frame_bytes = 64;
  std::int64_t period_us = 1000;
  /// Only control traffic has one.
  std::optional<std::int64_t> deadline_us;
};

TrafficProfile cnc_control_profile();
TrafficProfile sensor_telemetry_profile();

struct Device {
  std::string name;
  DeviceRole role = DeviceRole::Sensor;
  TrafficProfile profile;
};

/// Controller proxy, three servos, spindle, e-stop, two end switches.
std::vector<Device> cnc_devices();
/// Vibration, acoustic, temperature, humidity.
std::vector<Device> sensor_devices();

/// Offered load of a device set in Mbit/s.
double offered_mbps(const std::vector<Device>& devices);

}  // namespace nin::subnet
