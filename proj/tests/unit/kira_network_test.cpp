#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace nin;
using sim::NodeRef;

namespace {

sim::TopologyGraph line(std::uint32_t n) {
  sim::TopologyGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.add_node(NodeRef{i});
  for (std::uint32_t i = 0; i + 1 < n; ++i) g.add_link(NodeRef{i}, NodeRef{i + 1}, 2);
  return g;
}

kira::ControlMessage msg(const fixture::Overlay& o, std::uint32_t a, std::uint32_t b) {
  kira::ControlMessage m;
  m.src = o.net.id_of(NodeRef{a});
  m.dst = o.net.id_of(NodeRef{b});
  return m;
}

}  // namespace

TEST(KiraNetwork, NeighborsLearnEachOtherInOneRound) {
  fixture::Overlay o(line(2), 1);
  o.kernel.run_until(10);
  const auto* c = o.net.table(NodeRef{0}).find(o.net.id_of(NodeRef{1}));
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->hops, 1u);
  EXPECT_EQ(c->next_hop, NodeRef{1});
}

TEST(KiraNetwork, IdsAreUniqueAndLogged) {
  fixture::Overlay o(fixture::random_graph(3), 3);
  std::set<kira::NodeId> ids;
  for (const auto& [n, st] : o.kernel.topology().nodes()) ids.insert(o.net.id_of(n));
  EXPECT_EQ(ids.size(), o.kernel.topology().node_count());
  std::size_t logged = 0;
  for (const auto& r : o.kernel.log().records()) logged += r.event == "NODE_ID";
  EXPECT_EQ(logged, ids.size());
}

TEST(KiraNetwork, ThreeNodeLineRoutesBothWays) {
  fixture::Overlay o(line(3), 1);
  ASSERT_TRUE(o.converge());
  auto r = o.net.route(msg(o, 0, 2));
  ASSERT_TRUE(std::holds_alternative<kira::Delivered>(r));
  EXPECT_EQ(std::get<kira::Delivered>(r).path, (std::vector<NodeRef>{NodeRef{1}, NodeRef{2}}));
  r = o.net.route(msg(o, 2, 0));
  ASSERT_TRUE(std::holds_alternative<kira::Delivered>(r));
  EXPECT_EQ(std::get<kira::Delivered>(r).path, (std::vector<NodeRef>{NodeRef{1}, NodeRef{0}}));
  const auto& last = o.kernel.log().records().back();
  EXPECT_EQ(last.event, "ROUTE");
  EXPECT_TRUE(last.details.ends_with(" 2 1,0")) << last.details;
}

TEST(KiraNetwork, ConvergesWithinDiameterPlusTwoRounds) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    fixture::Overlay o(fixture::random_graph(seed), seed);
    ASSERT_TRUE(o.converge());
    EXPECT_LE(o.net.last_change_round(), static_cast<std::uint64_t>(oracle::diameter(o.kernel.topology()) + 2))
        << "seed " << seed;
    // Every node knows every other node at its BFS hop count.
    const auto& g = o.kernel.topology();
    for (const auto& [a, st] : g.nodes()) {
      for (const auto& [b, hops] : oracle::bfs(g, a)) {
        if (a == b) continue;
        const auto* c = o.net.table(a).find(o.net.id_of(b));
        ASSERT_NE(c, nullptr);
        EXPECT_EQ(c->hops, static_cast<std::uint32_t>(hops));
      }
    }
  }
}

TEST(KiraNetwork, PartitionGivesNoRouteThenHeals) {
  fixture::Overlay o(line(4), 2);
  ASSERT_TRUE(o.converge());
  o.kernel.schedule({o.kernel.now(), sim::EventKind::LinkDown, sim::LinkRef::make(NodeRef{1}, NodeRef{2})});
  ASSERT_TRUE(o.converge(o.kernel.now() + 30'000));
  auto r = o.net.route(msg(o, 0, 3));
  ASSERT_TRUE(std::holds_alternative<kira::Dropped>(r));
  EXPECT_EQ(std::get<kira::Dropped>(r).reason, kira::DropReason::NoRoute);
  EXPECT_EQ(o.net.table(NodeRef{0}).find(o.net.id_of(NodeRef{3})), nullptr);

  o.kernel.schedule({o.kernel.now(), sim::EventKind::LinkUp, sim::LinkRef::make(NodeRef{1}, NodeRef{2})});
  ASSERT_TRUE(o.converge(o.kernel.now() + 30'000));
  EXPECT_TRUE(std::holds_alternative<kira::Delivered>(o.net.route(msg(o, 0, 3))));
}

TEST(KiraNetwork, LinkEventsResetConvergence) {
  fixture::Overlay o(line(3), 3);
  ASSERT_TRUE(o.converge());
  o.kernel.schedule({o.kernel.now(), sim::EventKind::LinkDown, sim::LinkRef::make(NodeRef{0}, NodeRef{1})});
  o.kernel.run_until(o.kernel.now());
  EXPECT_FALSE(o.net.converged());
}

TEST(KiraNetwork, TtlAndSourceDown) {
  fixture::Overlay o(line(5), 4);
  ASSERT_TRUE(o.converge());
  auto m = msg(o, 0, 4);
  m.ttl = 2;
  auto r = o.net.route(m);
  ASSERT_TRUE(std::holds_alternative<kira::Dropped>(r));
  EXPECT_EQ(std::get<kira::Dropped>(r).reason, kira::DropReason::TtlExceeded);
  EXPECT_EQ(std::get<kira::Dropped>(r).path.size(), 2u);

  o.kernel.schedule({o.kernel.now(), sim::EventKind::NodeDown, NodeRef{0}});
  o.kernel.run_until(o.kernel.now());
  r = o.net.route(msg(o, 0, 4));
  EXPECT_EQ(std::get<kira::Dropped>(r).reason, kira::DropReason::SourceDown);
}

TEST(KiraNetwork, SendDeliversToBoundPortAfterLinkLatency) {
  fixture::Overlay o(line(3), 5);
  ASSERT_TRUE(o.converge());
  std::optional<sim::VirtualTime> got;
  o.net.bind(NodeRef{2}, 77, [&](NodeRef at, const kira::ControlMessage& m) {
    EXPECT_EQ(at, NodeRef{2});
    EXPECT_EQ(m.payload, std::vector<std::uint8_t>{42});
    got = o.kernel.now();
  });
  auto m = msg(o, 0, 2);
  m.dst_port = 77;
  m.payload = {42};
  const auto sent = o.kernel.now();
  bool outcome = false;
  o.net.send(m, [&](const kira::RouteResult& r) { outcome = std::holds_alternative<kira::Delivered>(r); });
  o.kernel.run_until(sent + 100);
  ASSERT_TRUE(got);
  EXPECT_EQ(*got - sent, 4);
  EXPECT_TRUE(outcome);
}

TEST(KiraNetwork, NodeDownMidPathIsReported) {
  fixture::Overlay o(line(3), 6);
  ASSERT_TRUE(o.converge());
  std::optional<kira::DropReason> reason;
  o.net.send(msg(o, 0, 2), [&](const kira::RouteResult& r) {
    if (const auto* d = std::get_if<kira::Dropped>(&r)) reason = d->reason;
  });
  o.kernel.schedule({o.kernel.now() + 1, sim::EventKind::NodeDown, NodeRef{1}});
  o.kernel.run_until(o.kernel.now() + 50);
  ASSERT_TRUE(reason);
  EXPECT_EQ(*reason, kira::DropReason::NodeDownMidPath);
}

TEST(KiraNetwork, RebootedNodeGetsFreshId) {
  fixture::Overlay o(line(3), 7);
  ASSERT_TRUE(o.converge());
  const auto before = o.net.id_of(NodeRef{2});
  o.kernel.schedule({o.kernel.now(), sim::EventKind::NodeDown, NodeRef{2}});
  o.kernel.schedule({o.kernel.now() + 5000, sim::EventKind::NodeUp, NodeRef{2}});
  o.kernel.run_until(o.kernel.now() + 5000);
  EXPECT_NE(o.net.id_of(NodeRef{2}), before);
  ASSERT_TRUE(o.converge(o.kernel.now() + 30'000));
  EXPECT_TRUE(std::holds_alternative<kira::Delivered>(o.net.route(msg(o, 0, 2))));
}

TEST(KiraNetwork, MalformedGossipIsCounted) {
  fixture::Overlay o(line(2), 8);
  kira::ControlMessage m = msg(o, 1, 0);
  m.kind = kira::MessageKind::ContactGossip;
  m.payload = {1, 2, 3};
  const auto d = o.net.receive_gossip(NodeRef{0}, NodeRef{1}, m);
  EXPECT_EQ(d.malformed, 1u);
  EXPECT_FALSE(d.changed());
}
