#include <gtest/gtest.h>

#include "nin/kira/routing_table.hpp"
#include "nin/sim/rng.hpp"

using namespace nin::kira;
using nin::sim::NodeRef;

namespace {

NodeId owner() { return NodeId{}; }

Contact contact(std::size_t bit, std::uint32_t next, std::uint32_t hops, std::int64_t stamp) {
  return Contact{NodeId::single_bit(bit), NodeRef{next}, hops, stamp, stamp};
}

}  // namespace

TEST(RoutingTable, BucketIsSharedPrefixLength) {
  RoutingTable t(owner());
  EXPECT_EQ(t.bucket_index(NodeId::single_bit(0)), 0u);
  EXPECT_EQ(t.bucket_index(NodeId::single_bit(37)), 37u);
  EXPECT_EQ(t.offer(contact(37, 1, 1, 10)), OfferResult::Inserted);
  EXPECT_EQ(t.bucket(37).size(), 1u);
}

TEST(RoutingTable, NewerStampOrFewerHopsWins) {
  RoutingTable t(owner());
  EXPECT_EQ(t.offer(contact(3, 1, 3, 10)), OfferResult::Inserted);
  EXPECT_EQ(t.offer(contact(3, 2, 5, 9)), OfferResult::Ignored);
  EXPECT_EQ(t.offer(contact(3, 2, 2, 10)), OfferResult::Replaced);
  EXPECT_EQ(t.offer(contact(3, 2, 2, 11)), OfferResult::Refreshed);
  EXPECT_EQ(t.offer(contact(3, 4, 7, 12)), OfferResult::Replaced);
  EXPECT_EQ(t.find(NodeId::single_bit(3))->next_hop, NodeRef{4});
}

TEST(RoutingTable, IgnoresSelfAndZeroHops) {
  RoutingTable t(owner());
  EXPECT_EQ(t.offer(Contact{owner(), NodeRef{1}, 1, 1, 1}), OfferResult::Ignored);
  EXPECT_EQ(t.offer(contact(5, 1, 0, 1)), OfferResult::Ignored);
  EXPECT_EQ(t.size(), 0u);
}

TEST(RoutingTable, WithdrawOnlyThroughTheReportingNeighbor) {
  RoutingTable t(owner());
  t.offer(contact(9, 1, 2, 100));
  EXPECT_FALSE(t.withdraw(NodeId::single_bit(9), 200, NodeRef{2}, 0));
  EXPECT_FALSE(t.withdraw(NodeId::single_bit(9), 100, NodeRef{1}, 0));
  EXPECT_TRUE(t.withdraw(NodeId::single_bit(9), 150, NodeRef{1}, 0));
  EXPECT_EQ(t.find(NodeId::single_bit(9)), nullptr);
  EXPECT_EQ(t.tombstone(NodeId::single_bit(9)), 150);
  // Older news stays buried, newer news resurrects.
  EXPECT_EQ(t.offer(contact(9, 3, 1, 150)), OfferResult::Ignored);
  EXPECT_EQ(t.offer(contact(9, 3, 1, 151)), OfferResult::Inserted);
  EXPECT_FALSE(t.tombstone(NodeId::single_bit(9)));
}

TEST(RoutingTable, TombstonesExpire) {
  RoutingTable t(owner());
  t.add_tombstone(NodeId::single_bit(1), 10, 1000);
  t.add_tombstone(NodeId::single_bit(2), 10, 3000);
  t.expire_tombstones(2000);
  EXPECT_FALSE(t.tombstone(NodeId::single_bit(1)));
  EXPECT_TRUE(t.tombstone(NodeId::single_bit(2)));
}

TEST(RoutingTable, FullBucketEvictsStalest) {
  RoutingTable t(owner(), 2);
  // Bucket 0 holds ids with the top bit set.
  auto id = [](std::uint8_t low) {
    NodeId::Bytes b{};
    b[0] = 0x80;
    b[19] = low;
    return NodeId(b);
  };
  EXPECT_EQ(t.offer({id(1), NodeRef{1}, 1, 10, 10}), OfferResult::Inserted);
  EXPECT_EQ(t.offer({id(2), NodeRef{1}, 1, 20, 20}), OfferResult::Inserted);
  EXPECT_EQ(t.offer({id(3), NodeRef{1}, 1, 5, 5}), OfferResult::BucketFull);
  EXPECT_EQ(t.offer({id(3), NodeRef{1}, 1, 30, 30}), OfferResult::Inserted);
  EXPECT_EQ(t.find(id(1)), nullptr);
  EXPECT_EQ(t.bucket(0).size(), 2u);
}

TEST(RoutingTable, RandomOffersKeepBestPerTarget) {
  nin::sim::Rng rng(5);
  RoutingTable t(NodeId::random(rng));
  std::vector<NodeId> targets;
  for (int i = 0; i < 20; ++i) targets.push_back(NodeId::random(rng));
  std::map<NodeId, Contact> best;
  for (int i = 0; i < 2000; ++i) {
    const auto& target = targets[rng.below(targets.size())];
    Contact c{target, NodeRef{static_cast<std::uint32_t>(rng.below(5))}, static_cast<std::uint32_t>(rng.between(1, 9)),
              rng.between(0, 50), 0};
    t.offer(c);
    auto it = best.find(target);
    if (it == best.end() || c.freshness > it->second.freshness ||
        (c.freshness == it->second.freshness && c.hops < it->second.hops)) {
      best[target] = c;
    }
  }
  for (const auto& [target, c] : best) {
    const auto* got = t.find(target);
    ASSERT_NE(got, nullptr);
    EXPECT_EQ(got->freshness, c.freshness);
    EXPECT_EQ(got->hops, c.hops);
  }
}
