#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nin/kira/node_id.hpp"
#include "nin/sim/types.hpp"

namespace nin::kira {

enum class MessageKind : std::uint8_t { Hello, ContactGossip, DhtPut, DhtGet, DhtValue, App };

std::string_view to_string(MessageKind kind);

struct ControlMessage {
  NodeId src;
  NodeId dst;
  /// Remaining hop budget; decremented per forwarding step.
  std::uint32_t ttl = 64;
  MessageKind kind = MessageKind::App;
  std::uint16_t src_port = 0;
  std::uint16_t dst_port = 0;
  std::vector<std::uint8_t> payload;
};

/// One advertised contact: 20-byte id, u16 hops, u64 stamp, big-endian.
/// hops == 0 is the sender itself; kWithdrawnHops marks a broken route.
struct GossipEntry {
  NodeId target;
  std::uint16_t hops = 0;
  sim::VirtualTime stamp = 0;

  bool operator==(const GossipEntry&) const = default;
};

inline constexpr std::uint16_t kWithdrawnHops = 0xFFFF;
inline constexpr std::size_t kGossipEntryBytes = NodeId::kBytes + 2 + 8;

std::vector<std::uint8_t> encode_gossip(std::span<const GossipEntry> entries);

struct DecodedGossip {
  std::vector<GossipEntry> entries;
  std::size_t malformed = 0;
};

/// Skips (and counts) truncated trailing bytes and negative stamps.
DecodedGossip decode_gossip(std::span<const std::uint8_t> payload);

}  // namespace nin::kira
