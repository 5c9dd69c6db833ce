#include "nin/subnet/traffic.hpp"

namespace nin::subnet {

double capacity_mbps(const dsm::SpectrumBand& band) { return static_cast<double>(capacity_bits_per_us(band)); }

std::uint64_t capacity_bits_per_us(const dsm::SpectrumBand& band) {
  return std::uint64_t{band.width()} * kSpectralEfficiency;
}

std::string_view to_string(TrafficKind kind) {
  return kind == TrafficKind::CncControl ? "CncControl" : "SensorTelemetry";
}

std::string_view to_string(DeviceRole role) {
  switch (role) {
    case DeviceRole::Actuator: return "Actuator";
    case DeviceRole::Sensor: return "Sensor";
    case DeviceRole::Controller: return "Controller";
  }
  return "?";
}

TrafficProfile cnc_control_profile() { return {TrafficKind::CncControl, 64, 1000, 1000}; }

TrafficProfile sensor_telemetry_profile() { return {TrafficKind::SensorTelemetry, 1500, 500, std::nullopt}; }

std::vector<Device> cnc_devices() {
  const auto p = cnc_control_profile();
  return {
      {"controller-proxy", DeviceRole::Controller, p},
      {"servo-x", DeviceRole::Actuator, p},
      {"servo-y", DeviceRole::Actuator, p},
      {"servo-z", DeviceRole::Actuator, p},
      {"spindle", DeviceRole::Actuator, p},
      {"e-stop", DeviceRole::Sensor, p},
      {"end-switch-1", DeviceRole::Sensor, p},
      {"end-switch-2", DeviceRole::Sensor, p},
  };
}

std::vector<Device> sensor_devices() {
  const auto p = sensor_telemetry_profile();
  return {
      {"vibration", DeviceRole::Sensor, p},
      {"acoustic", DeviceRole::Sensor, p},
      {"temperature", DeviceRole::Sensor, p},
      {"humidity", DeviceRole::Sensor, p},
  };
}

double offered_mbps(const std::vector<Device>& devices) {
  double bits_per_us = 0;
  for (const auto& d : devices) {
    bits_per_us += static_cast<double>(d.profile.frame_bytes) * 8 / static_cast<double>(d.profile.period_us);
  }
  return bits_per_us;
}

}  // namespace nin::subnet
