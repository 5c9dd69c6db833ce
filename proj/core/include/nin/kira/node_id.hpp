#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "nin/sim/rng.hpp"

namespace nin::kira {

inline constexpr std::size_t kIdBits = 160;

/// 160-bit identifier, stored big-endian so the defaulted ordering is the
/// unsigned integer ordering.
class NodeId {
 public:
  static constexpr std::size_t kBytes = kIdBits / 8;
  using Bytes = std::array<std::uint8_t, kBytes>;

  constexpr NodeId() = default;
  constexpr explicit NodeId(const Bytes& bytes) : bytes_(bytes) {}

  static NodeId random(sim::Rng& rng);
  static std::optional<NodeId> from_hex(std::string_view hex);
  /// The value 2^(159 - index), i.e. only bit `index` (MSB first) set.
  static NodeId single_bit(std::size_t index);

  const Bytes& bytes() const { return bytes_; }
  /// Bit `index` counted from the most significant bit.
  bool bit(std::size_t index) const { return (bytes_[index / 8] >> (7 - index % 8)) & 1U; }
  bool is_zero() const;
  /// 40 lowercase hex chars.
  std::string hex() const;
  /// First 8 hex chars, for log readability.
  std::string short_hex() const { return hex().substr(0, 8); }

  constexpr auto operator<=>(const NodeId&) const = default;

 private:
  Bytes bytes_{};
};

/// XOR metric value, an unsigned 160-bit integer.
struct Distance {
  NodeId::Bytes bytes{};

  bool is_zero() const;
  std::string hex() const { return NodeId(bytes).hex(); }
  constexpr auto operator<=>(const Distance&) const = default;
};

Distance xor_distance(const NodeId& a, const NodeId& b);

/// Number of leading bits a and b share; kIdBits when equal.
std::size_t shared_prefix_length(const NodeId& a, const NodeId& b);

/// SHA-256 of the key truncated to its first 160 bits.
NodeId key_to_id(std::string_view key);

}  // namespace nin::kira
