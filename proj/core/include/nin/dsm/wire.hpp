#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nin/dsm/spectrum.hpp"

namespace nin::dsm::wire {

/// Frame: u16 length (kind byte + body), u8 kind, body. Big-endian.
enum class Kind : std::uint8_t {
  Register = 1,
  Grant = 2,
  Heartbeat = 3,
  Reconfigure = 4,
  Ack = 5,
  Deregister = 6,
  /// SM to SNC: your session is unknown, register again.
  Reregister = 7,
};

struct Register {
  std::uint16_t subnet = 0;
  Qos qos = Qos::Urllc;
  std::uint8_t requested_mhz = 0;
  std::uint8_t priority = 0;
  bool operator==(const Register&) const = default;
};
/// low/high are absolute MHz.
struct Grant {
  std::uint32_t version = 0;
  std::uint16_t low = 0;
  std::uint16_t high = 0;
  bool operator==(const Grant&) const = default;
};
struct Heartbeat {
  std::uint16_t subnet = 0;
  std::uint32_t version = 0;
  bool operator==(const Heartbeat&) const = default;
};
struct Reconfigure {
  std::uint32_t version = 0;
  std::uint16_t low = 0;
  std::uint16_t high = 0;
  bool operator==(const Reconfigure&) const = default;
};
struct Ack {
  std::uint32_t version = 0;
  bool operator==(const Ack&) const = default;
};
struct Deregister {
  std::uint16_t subnet = 0;
  bool operator==(const Deregister&) const = default;
};
struct Reregister {
  std::uint16_t subnet = 0;
  bool operator==(const Reregister&) const = default;
};

using Message = std::variant<Register, Grant, Heartbeat, Reconfigure, Ack, Deregister, Reregister>;

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> encode(const Message& message);
/// Throws DecodeError on a short buffer, bad length, unknown kind or
/// trailing bytes.
Message decode(std::span<const std::uint8_t> frame);
std::string describe(const Message& message);

}  // namespace nin::dsm::wire
