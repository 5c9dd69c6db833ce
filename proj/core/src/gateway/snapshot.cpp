#include "nin/gateway/snapshot.hpp"

#include <algorithm>

#include <json.hpp>

namespace nin::gateway {

using nlohmann::json;

StateSnapshot capture(const testbed::Testbed& tb, std::size_t log_tail) {
  StateSnapshot s;
  const auto& topo = tb.kernel().topology();
  s.t = tb.kernel().now();
  for (const auto& [ref, status] : topo.nodes()) {
    s.nodes.push_back({ref.value, tb.kira().id_of(ref).hex(), status == sim::Status::Up,
                       tb.kira().table(ref).size()});
  }
  for (const auto& [l, link] : topo.links()) {
    s.links.push_back({l.a.value, l.b.value, link.latency_ms, topo.link_usable(l.a, l.b)});
  }
  s.converged = tb.kira().converged();
  s.gossip_round = tb.kira().round();
  s.sm_host = tb.sm().host().value;
  s.sm_online = tb.sm().online();
  const auto& mgr = tb.sm().manager();
  s.plan_version = mgr.plan().version;
  for (const auto& [id, band] : mgr.plan().assignments) {
    s.plan.push_back({id.value, band.low_mhz, band.high_mhz});
  }
  for (const auto& [id, rt] : tb.subnets()) {
    SubnetView v;
    v.subnet = id.value;
    v.master = rt->master.value;
    v.profile = rt->profile;
    v.switched_on = rt->switched_on;
    v.running = rt->running;
    v.phase = std::string(subnet::to_string(rt->snc.phase()));
    v.version = rt->snc.version();
    v.low_mhz = rt->mac.band().low_mhz;
    v.high_mhz = rt->mac.band().high_mhz;
    auto sess = mgr.sessions().find(id);
    v.session = sess == mgr.sessions().end() ? "none" : std::string(dsm::to_string(sess->second.status));
    v.metrics = rt->last_metrics;
    s.subnets.push_back(std::move(v));
  }
  const auto& recs = tb.kernel().log().records();
  const auto first = recs.size() > log_tail ? recs.size() - log_tail : 0;
  s.log_tail.assign(recs.begin() + static_cast<std::ptrdiff_t>(first), recs.end());
  return s;
}

namespace {

json record_json(const sim::LogRecord& r) {
  return {{"t", r.t}, {"module", r.module}, {"event", r.event}, {"details", r.details}};
}

json metrics_json(const subnet::SubnetMetrics& m) {
  return {{"throughput_mbps", m.throughput_mbps},
          {"latency_p50_us", m.latency_p50_us},
          {"latency_p99_us", m.latency_p99_us},
          {"jitter_us", m.jitter_us},
          {"deadline_miss_ratio", m.deadline_miss_ratio},
          {"frames_dropped", m.frames_dropped},
          {"no_data", m.no_data}};
}

}  // namespace

std::string to_json(const sim::LogRecord& record) { return record_json(record).dump(); }

std::string to_json(const StateSnapshot& s) {
  json j;
  j["t"] = s.t;
  j["nodes"] = json::array();
  for (const auto& n : s.nodes) {
    j["nodes"].push_back({{"node", n.node}, {"id", n.id}, {"up", n.up}, {"contacts", n.contacts}});
  }
  j["links"] = json::array();
  for (const auto& l : s.links) {
    j["links"].push_back({{"a", l.a}, {"b", l.b}, {"latency_ms", l.latency_ms}, {"up", l.up}});
  }
  j["routing"] = {{"converged", s.converged}, {"round", s.gossip_round}};
  j["sm"] = {{"host", s.sm_host}, {"online", s.sm_online}};
  json bands = json::array();
  for (const auto& b : s.plan) {
    bands.push_back({{"subnet", b.subnet}, {"low_mhz", b.low_mhz}, {"high_mhz", b.high_mhz}});
  }
  j["plan"] = {{"version", s.plan_version}, {"assignments", bands}};
  j["subnets"] = json::array();
  for (const auto& v : s.subnets) {
    j["subnets"].push_back({{"subnet", v.subnet},
                            {"master", v.master},
                            {"profile", v.profile},
                            {"switched_on", v.switched_on},
                            {"running", v.running},
                            {"phase", v.phase},
                            {"version", v.version},
                            {"band", {{"low_mhz", v.low_mhz}, {"high_mhz", v.high_mhz}}},
                            {"session", v.session},
                            {"metrics", metrics_json(v.metrics)}});
  }
  j["log_tail"] = json::array();
  for (const auto& r : s.log_tail) j["log_tail"].push_back(record_json(r));
  return j.dump();
}

void SnapshotCell::store(StateSnapshot snapshot) {
  auto json_text = std::make_shared<const std::string>(to_json(snapshot));
  auto snap = std::make_shared<const StateSnapshot>(std::move(snapshot));
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snap);
  json_ = std::move(json_text);
}

std::shared_ptr<const StateSnapshot> SnapshotCell::load() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

std::shared_ptr<const std::string> SnapshotCell::json() const {
  std::lock_guard lock(mutex_);
  return json_;
}

}  // namespace nin::gateway
