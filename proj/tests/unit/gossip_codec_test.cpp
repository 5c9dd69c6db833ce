#include <gtest/gtest.h>

#include "nin/kira/message.hpp"
#include "nin/sim/rng.hpp"

using namespace nin::kira;

TEST(GossipCodec, RoundTrip) {
  nin::sim::Rng rng(2);
  std::vector<GossipEntry> entries;
  for (int i = 0; i < 50; ++i) {
    entries.push_back({NodeId::random(rng), static_cast<std::uint16_t>(rng.below(65536)), rng.between(0, 1LL << 50)});
  }
  const auto bytes = encode_gossip(entries);
  EXPECT_EQ(bytes.size(), entries.size() * kGossipEntryBytes);
  const auto back = decode_gossip(bytes);
  EXPECT_EQ(back.entries, entries);
  EXPECT_EQ(back.malformed, 0u);
}

TEST(GossipCodec, LayoutIsBigEndian) {
  const GossipEntry e{NodeId::single_bit(0), 0x0102, 0x0304};
  const auto b = encode_gossip(std::vector{e});
  ASSERT_EQ(b.size(), 30u);
  EXPECT_EQ(b[0], 0x80);
  EXPECT_EQ(b[20], 0x01);
  EXPECT_EQ(b[21], 0x02);
  EXPECT_EQ(b[28], 0x03);
  EXPECT_EQ(b[29], 0x04);
}

TEST(GossipCodec, TruncatedTailAndNegativeStampsAreCounted) {
  std::vector<GossipEntry> entries{{NodeId::single_bit(1), 1, 5}, {NodeId::single_bit(2), 2, -1}};
  auto bytes = encode_gossip(entries);
  bytes.push_back(0xAB);
  const auto back = decode_gossip(bytes);
  ASSERT_EQ(back.entries.size(), 1u);
  EXPECT_EQ(back.entries[0], entries[0]);
  EXPECT_EQ(back.malformed, 2u);
}

TEST(GossipCodec, EmptyPayload) {
  const auto back = decode_gossip({});
  EXPECT_TRUE(back.entries.empty());
  EXPECT_EQ(back.malformed, 0u);
}
