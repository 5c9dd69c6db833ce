#include <algorithm>

#include "nin/kira/message.hpp"

namespace nin::kira {

std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Hello: return "HELLO";
    case MessageKind::ContactGossip: return "CONTACT_GOSSIP";
    case MessageKind::DhtPut: return "DHT_PUT";
    case MessageKind::DhtGet: return "DHT_GET";
    case MessageKind::DhtValue: return "DHT_VALUE";
    case MessageKind::App: return "APP";
  }
  return "?";
}

std::vector<std::uint8_t> encode_gossip(std::span<const GossipEntry> entries) {
  std::vector<std::uint8_t> out;
  out.reserve(entries.size() * kGossipEntryBytes);
  for (const GossipEntry& e : entries) {
    out.insert(out.end(), e.target.bytes().begin(), e.target.bytes().end());
    out.push_back(static_cast<std::uint8_t>(e.hops >> 8));
    out.push_back(static_cast<std::uint8_t>(e.hops));
    const auto stamp = static_cast<std::uint64_t>(e.stamp);
    for (int shift = 56; shift >= 0; shift -= 8) {
      out.push_back(static_cast<std::uint8_t>(stamp >> shift));
    }
  }
  return out;
}

DecodedGossip decode_gossip(std::span<const std::uint8_t> payload) {
  DecodedGossip out;
  const std::size_t whole = payload.size() / kGossipEntryBytes;
  out.malformed = payload.size() % kGossipEntryBytes == 0 ? 0 : 1;
  out.entries.reserve(whole);
  for (std::size_t i = 0; i < whole; ++i) {
    const auto chunk = payload.subspan(i * kGossipEntryBytes, kGossipEntryBytes);
    NodeId::Bytes id{};
    std::copy_n(chunk.begin(), NodeId::kBytes, id.begin());
    GossipEntry e;
    e.target = NodeId(id);
    e.hops = static_cast<std::uint16_t>(chunk[20] << 8 | chunk[21]);
    std::uint64_t stamp = 0;
    for (std::size_t b = 22; b < kGossipEntryBytes; ++b) {
      stamp = stamp << 8 | chunk[b];
    }
    e.stamp = static_cast<sim::VirtualTime>(stamp);
    if (e.stamp < 0) {
      ++out.malformed;
      continue;
    }
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace nin::kira
