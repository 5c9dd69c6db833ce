#include "nin/kira/network.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace nin::kira {

namespace {
constexpr const char* kModule = "kira";
}

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::TtlExceeded: return "TtlExceeded";
    case DropReason::NoRoute: return "NoRoute";
    case DropReason::NodeDownMidPath: return "NodeDownMidPath";
    case DropReason::SourceDown: return "SourceDown";
  }
  return "?";
}

TableDelta& TableDelta::operator+=(const TableDelta& o) {
  inserted += o.inserted;
  replaced += o.replaced;
  refreshed += o.refreshed;
  removed += o.removed;
  malformed += o.malformed;
  return *this;
}

std::string format_path(const std::vector<sim::NodeRef>& path) {
  if (path.empty()) {
    return "-";
  }
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(path[i].value);
  }
  return out;
}

namespace {

void count(TableDelta& delta, OfferResult r) {
  switch (r) {
    case OfferResult::Inserted: ++delta.inserted; break;
    case OfferResult::Replaced: ++delta.replaced; break;
    case OfferResult::Refreshed: ++delta.refreshed; break;
    case OfferResult::Ignored:
    case OfferResult::BucketFull: break;
  }
}

}  // namespace

KiraNetwork::KiraNetwork(sim::Kernel& kernel, KiraConfig config)
    : kernel_(kernel), config_(config), rng_(kernel.rng_stream("kira")) {
  for (const auto& [ref, status] : kernel_.topology().nodes()) {
    assign_id(ref);
  }
  kernel_.on_net_event([this](const sim::NetEvent& e) { handle_net_event(e); });
}

void KiraNetwork::assign_id(sim::NodeRef ref) {
  NodeId id;
  do {
    id = NodeId::random(rng_);
  } while (id.is_zero() || by_id_.contains(id));
  if (auto it = nodes_.find(ref); it != nodes_.end()) {
    by_id_.erase(it->second.id);
    nodes_.erase(it);
  }
  nodes_.emplace(ref, Node{id, RoutingTable(id, config_.bucket_capacity), DhtStore{}});
  by_id_.emplace(id, ref);
  kernel_.emit(kModule, "NODE_ID", fmt::format("node={} id={}", ref.value, id.hex()));
}

void KiraNetwork::handle_net_event(const sim::NetEvent& e) {
  if (!std::holds_alternative<sim::NodeRef>(e.target)) {
    // Link changes show up in tables only a round later; until then the
    // overlay is not settled.
    if (e.kind == sim::EventKind::LinkUp || e.kind == sim::EventKind::LinkDown) last_change_round_ = round_;
    return;
  }
  const auto ref = std::get<sim::NodeRef>(e.target);
  if (e.kind == sim::EventKind::NodeDown) {
    Node& n = node(ref);
    TableDelta d;
    d.removed = n.table.size();
    n.table = RoutingTable(n.id, config_.bucket_capacity);
    n.store.clear();
    std::erase_if(publications_, [&](const auto& p) { return p.first.first == ref; });
    note(d);
  } else if (e.kind == sim::EventKind::NodeUp) {
    assign_id(ref);
    TableDelta d;
    d.inserted = 1;
    note(d);
  }
}

KiraNetwork::Node& KiraNetwork::node(sim::NodeRef ref) {
  auto it = nodes_.find(ref);
  if (it == nodes_.end()) {
    throw std::out_of_range(fmt::format("unknown node {}", ref.value));
  }
  return it->second;
}

const KiraNetwork::Node& KiraNetwork::node(sim::NodeRef ref) const {
  return const_cast<KiraNetwork*>(this)->node(ref);
}

const NodeId& KiraNetwork::id_of(sim::NodeRef ref) const { return node(ref).id; }

std::optional<sim::NodeRef> KiraNetwork::ref_of(const NodeId& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

const RoutingTable& KiraNetwork::table(sim::NodeRef ref) const { return node(ref).table; }
const DhtStore& KiraNetwork::store(sim::NodeRef ref) const { return node(ref).store; }

void KiraNetwork::note(const TableDelta& delta) {
  malformed_ += delta.malformed;
  if (delta.changed()) {
    last_change_round_ = round_;
  }
}

void KiraNetwork::start() {
  if (started_) return;
  started_ = true;
  schedule_gossip(kernel_.now());
  schedule_maintenance(kernel_.now() + config_.dht_maintenance_period_ms);
}

void KiraNetwork::schedule_gossip(sim::VirtualTime at) {
  kernel_.schedule_timer(at, sim::TimerClass::Gossip, 0, [this] { gossip_tick(); });
}

void KiraNetwork::schedule_maintenance(sim::VirtualTime at) {
  kernel_.schedule_timer(at, sim::TimerClass::Dht, 0, [this] {
    for (sim::NodeRef n : kernel_.topology().live_nodes()) {
      republish_tick(n);
    }
    schedule_maintenance(kernel_.now() + config_.dht_maintenance_period_ms);
  });
}

// ---- contact plane ----

TableDelta KiraNetwork::on_hello(sim::NodeRef self, sim::NodeRef neighbor, sim::VirtualTime stamp) {
  TableDelta d;
  count(d, node(self).table.offer(Contact{id_of(neighbor), neighbor, 1, stamp, kernel_.now()}));
  return d;
}

std::vector<OutgoingGossip> KiraNetwork::gossip_round(sim::NodeRef self) {
  const Node& n = node(self);
  std::vector<GossipEntry> entries;
  entries.push_back({n.id, 0, kernel_.now()});
  for (const Contact& c : n.table.contacts()) {
    entries.push_back({c.target, static_cast<std::uint16_t>(c.hops), c.freshness});
  }
  for (const auto& [target, stamp] : n.table.tombstones()) {
    entries.push_back({target, kWithdrawnHops, stamp});
  }
  const auto payload = encode_gossip(entries);
  std::vector<OutgoingGossip> out;
  for (sim::NodeRef nb : kernel_.topology().live_neighbors(self)) {
    ControlMessage m;
    m.src = n.id;
    m.dst = id_of(nb);
    m.ttl = 1;
    m.kind = MessageKind::ContactGossip;
    m.payload = payload;
    out.push_back({nb, std::move(m)});
  }
  return out;
}

TableDelta KiraNetwork::receive_gossip(sim::NodeRef self, sim::NodeRef from, const ControlMessage& message) {
  TableDelta d;
  Node& n = node(self);
  const NodeId sender = id_of(from);
  const auto decoded = decode_gossip(message.payload);
  d.malformed = decoded.malformed;
  const auto now = kernel_.now();
  for (const GossipEntry& e : decoded.entries) {
    if (e.hops == 0) {
      if (e.target != sender || message.src != sender) {
        ++d.malformed;
        continue;
      }
      d += on_hello(self, from, e.stamp);
    } else if (e.hops == kWithdrawnHops) {
      if (n.table.withdraw(e.target, e.stamp, from, now)) {
        ++d.removed;
      }
    } else {
      if (e.target == n.id) continue;
      const std::uint32_t hops = e.hops + 1U;
      if (hops > config_.max_hops) continue;
      count(d, n.table.offer(Contact{e.target, from, hops, e.stamp, now}));
    }
  }
  return d;
}

TableDelta KiraNetwork::purge(sim::NodeRef self) {
  Node& n = node(self);
  const auto now = kernel_.now();
  const auto stale_after = config_.gossip_period_ms * static_cast<sim::VirtualTime>(config_.stale_periods);
  const auto& topo = kernel_.topology();
  auto removed = n.table.remove_if([&](const Contact& c) {
    return !topo.link_usable(self, c.next_hop) || now - c.refreshed_at >= stale_after;
  });
  for (const Contact& c : removed) {
    n.table.add_tombstone(c.target, c.freshness + 1, now);
  }
  n.table.expire_tombstones(now - 2 * stale_after);
  TableDelta d;
  d.removed = removed.size();
  return d;
}

void KiraNetwork::gossip_tick() {
  ++round_;
  const auto live = kernel_.topology().live_nodes();
  for (sim::NodeRef n : live) {
    note(purge(n));
  }
  for (sim::NodeRef n : live) {
    for (OutgoingGossip& g : gossip_round(n)) {
      const auto lat = kernel_.topology().latency(n, g.to).value_or(1);
      kernel_.schedule_after(lat, sim::TimerClass::Delivery, g.to.value,
                             [this, from = n, to = g.to, msg = std::move(g.message)] {
                               if (!kernel_.topology().link_usable(from, to)) return;
                               if (msg.src != id_of(from) || msg.dst != id_of(to)) return;
                               note(receive_gossip(to, from, msg));
                             });
    }
  }
  schedule_gossip(kernel_.now() + config_.gossip_period_ms);
}

// ---- forwarding ----

NextHop KiraNetwork::next_hop(sim::NodeRef self, const NodeId& dst) const {
  const Node& n = node(self);
  if (n.id == dst) {
    return NextHop{NextHop::Kind::Local, self, std::nullopt};
  }
  const Distance own = xor_distance(n.id, dst);
  const auto& topo = kernel_.topology();
  std::optional<Contact> best;
  Distance best_d{};
  for (const Contact& c : n.table.contacts()) {
    if (!topo.link_usable(self, c.next_hop)) continue;
    const Distance d = xor_distance(c.target, dst);
    if (d >= own) continue;
    if (!best || d < best_d || (d == best_d && c.next_hop < best->next_hop)) {
      best = c;
      best_d = d;
    }
  }
  if (!best) {
    return NextHop{};
  }
  return NextHop{NextHop::Kind::Forward, best->next_hop, best};
}

KiraNetwork::Step KiraNetwork::step_at(sim::NodeRef at, ControlMessage& m, std::vector<HopProgress>& progress) const {
  if (id_of(at) == m.dst) {
    return {StepKind::Deliver};
  }
  if (m.ttl == 0) {
    return {StepKind::Drop, {}, DropReason::TtlExceeded};
  }
  const NextHop nh = next_hop(at, m.dst);
  if (nh.kind != NextHop::Kind::Forward) {
    return {StepKind::Drop, {}, DropReason::NoRoute};
  }
  progress.push_back({at, nh.via->target, xor_distance(nh.via->target, m.dst), nh.via->hops});
  --m.ttl;
  return {StepKind::Forward, nh.node};
}

RouteResult KiraNetwork::walk(const ControlMessage& message) const {
  const auto src = ref_of(message.src);
  if (!src || !is_up(*src)) {
    return Dropped{DropReason::SourceDown, {}};
  }
  ControlMessage m = message;
  std::vector<sim::NodeRef> path;
  std::vector<HopProgress> progress;
  sim::NodeRef at = *src;
  for (;;) {
    const Step s = step_at(at, m, progress);
    switch (s.kind) {
      case StepKind::Deliver: return Delivered{std::move(path), std::move(progress)};
      case StepKind::Drop: return Dropped{s.reason, std::move(path)};
      case StepKind::Forward:
        path.push_back(s.next);
        at = s.next;
        break;
    }
  }
}

bool KiraNetwork::reachable(sim::NodeRef from, sim::NodeRef to) const {
  if (!is_up(from) || !is_up(to)) return false;
  ControlMessage m;
  m.src = id_of(from);
  m.dst = id_of(to);
  m.ttl = config_.max_hops;
  return std::holds_alternative<Delivered>(walk(m));
}

RouteResult KiraNetwork::route(const ControlMessage& message) {
  RouteResult r = walk(message);
  log_route(message, r);
  return r;
}

void KiraNetwork::log_route(const ControlMessage& m, const RouteResult& r) {
  if (const auto* d = std::get_if<Delivered>(&r)) {
    kernel_.emit(kModule, "ROUTE",
                 fmt::format("{} {} {} {}", m.src.hex(), m.dst.hex(), d->path.size(), format_path(d->path)));
  } else {
    const auto& x = std::get<Dropped>(r);
    kernel_.emit(kModule, "ROUTE_DROPPED",
                 fmt::format("{} {} {} {}", m.src.hex(), m.dst.hex(), to_string(x.reason), format_path(x.path)));
  }
}

void KiraNetwork::send(ControlMessage message, OutcomeHandler on_outcome) {
  const auto src = ref_of(message.src);
  if (!src || !is_up(*src)) {
    finish(message, Dropped{DropReason::SourceDown, {}}, on_outcome);
    return;
  }
  auto t = std::make_shared<Transit>(Transit{std::move(message), std::move(on_outcome), {}, {}});
  forward(*src, std::move(t));
}

void KiraNetwork::forward(sim::NodeRef at, std::shared_ptr<Transit> t) {
  const Step s = step_at(at, t->message, t->progress);
  if (s.kind == StepKind::Drop) {
    finish(t->message, Dropped{s.reason, t->path}, t->done);
    return;
  }
  if (s.kind == StepKind::Deliver) {
    finish(t->message, Delivered{t->path, t->progress}, t->done);
    if (auto it = ports_.find({at, t->message.dst_port}); it != ports_.end()) {
      it->second(at, t->message);
    }
    return;
  }
  const auto lat = kernel_.topology().latency(at, s.next).value_or(1);
  t->path.push_back(s.next);
  kernel_.schedule_after(lat, sim::TimerClass::Delivery, s.next.value, [this, at, next = s.next, t] {
    if (!kernel_.topology().link_usable(at, next)) {
      finish(t->message, Dropped{DropReason::NodeDownMidPath, t->path}, t->done);
      return;
    }
    forward(next, t);
  });
}

void KiraNetwork::finish(const ControlMessage& m, const RouteResult& r, const OutcomeHandler& done) {
  log_route(m, r);
  if (done) done(r);
}

void KiraNetwork::bind(sim::NodeRef node, std::uint16_t port, PortHandler handler) {
  ports_[{node, port}] = std::move(handler);
}

// ---- name binding ----

std::vector<sim::NodeRef> KiraNetwork::lookup(sim::NodeRef origin, const NodeId& key) {
  if (!is_up(origin)) return {};
  struct Candidate {
    sim::NodeRef ref;
    bool queried = false;
    bool responsive = false;
  };
  std::map<Distance, Candidate> cands;
  auto add = [&](const NodeId& id) {
    if (auto ref = ref_of(id)) cands.try_emplace(xor_distance(id, key), Candidate{*ref});
  };
  add(id_of(origin));
  for (const Contact& c : table(origin).contacts()) add(c.target);

  for (;;) {
    std::vector<Candidate*> batch;
    std::size_t seen = 0;
    for (auto& [d, c] : cands) {
      if (c.queried && !c.responsive) continue;
      if (++seen > config_.lookup_width) break;
      if (!c.queried) batch.push_back(&c);
      if (batch.size() == config_.lookup_parallelism) break;
    }
    if (batch.empty()) break;
    for (Candidate* c : batch) {
      c->queried = true;
      c->responsive = c->ref == origin || (reachable(origin, c->ref) && reachable(c->ref, origin));
      if (!c->responsive) continue;
      auto contacts = table(c->ref).contacts();
      std::sort(contacts.begin(), contacts.end(), [&](const Contact& a, const Contact& b) {
        return xor_distance(a.target, key) < xor_distance(b.target, key);
      });
      if (contacts.size() > config_.lookup_width) contacts.resize(config_.lookup_width);
      for (const Contact& x : contacts) add(x.target);
    }
  }
  std::vector<sim::NodeRef> out;
  for (const auto& [d, c] : cands) {
    if (c.responsive) out.push_back(c.ref);
    if (out.size() == config_.lookup_width) break;
  }
  return out;
}

PutResult KiraNetwork::dht_put(sim::NodeRef origin, const DhtRecord& record) {
  PutResult r;
  auto nodes = lookup(origin, key_to_id(record.key));
  for (sim::NodeRef n : nodes) {
    if (r.replicas.size() == config_.replicas) break;
    node(n).store.store(record, kernel_.now());
    r.replicas.push_back(id_of(n));
  }
  std::string where = "PutFailed";
  if (r.ok()) {
    where.clear();
    for (const NodeId& id : r.replicas) {
      if (!where.empty()) where += ',';
      where += id.hex();
    }
  }
  kernel_.emit(kModule, "DHT_PUT", fmt::format("{} v={} {}", record.key, record.version, where));
  return r;
}

std::optional<DhtRecord> KiraNetwork::dht_get(sim::NodeRef origin, std::string_view key) {
  for (sim::NodeRef n : lookup(origin, key_to_id(key))) {
    if (auto rec = node(n).store.lookup(key, kernel_.now())) {
      kernel_.emit(kModule, "DHT_GET",
                   fmt::format("{} found v={} {}:{} from={}", key, rec->version, rec->value.node.hex(), rec->value.port,
                               id_of(n).hex()));
      return rec;
    }
  }
  kernel_.emit(kModule, "DHT_GET", fmt::format("{} NotFound", key));
  return std::nullopt;
}

sim::VirtualTime KiraNetwork::next_republish(const Publication& pub, const PutResult& put) const {
  const bool settled = put.replicas.size() == config_.replicas && put.replicas == pub.replicas;
  return kernel_.now() +
         (settled ? static_cast<sim::VirtualTime>(pub.record.ttl_s) * 500 : config_.dht_maintenance_period_ms);
}

PutResult KiraNetwork::publish(sim::NodeRef origin, const DhtRecord& record) {
  PutResult r = dht_put(origin, record);
  if (r.ok()) {
    Publication pub{record, 0, {}};
    pub.next_due = next_republish(pub, r);
    pub.replicas = r.replicas;
    publications_[{origin, record.key}] = std::move(pub);
  }
  return r;
}

void KiraNetwork::unpublish(sim::NodeRef origin, std::string_view key) {
  publications_.erase({origin, std::string(key)});
}

std::size_t KiraNetwork::republish_tick(sim::NodeRef ref) {
  const auto now = kernel_.now();
  node(ref).store.purge_expired(now);
  std::size_t n = 0;
  for (auto& [k, pub] : publications_) {
    if (k.first != ref || pub.next_due > now) continue;
    const PutResult r = dht_put(ref, pub.record);
    if (r.ok()) {
      pub.next_due = next_republish(pub, r);
      pub.replicas = r.replicas;
      ++n;
    }
  }
  return n;
}

}  // namespace nin::kira
