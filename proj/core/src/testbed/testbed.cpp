#include "nin/testbed/testbed.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace nin::testbed {

namespace {

constexpr const char* kModule = "subnet";

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

subnet::Nanos to_ns(sim::VirtualTime ms) { return ms * 1'000'000; }

}  // namespace

std::string resolve_profile(sim::SubnetId id, const sim::SubnetDecl* decl) {
  if (decl && !decl->profile.empty()) return decl->profile;
  return id.value % 2 == 1 ? "cnc" : "sensor";
}

dsm::SubnetRequirement resolve_requirement(sim::SubnetId id, const sim::SubnetDecl* decl) {
  const bool cnc = resolve_profile(id, decl) == "cnc";
  dsm::SubnetRequirement r{id, cnc ? dsm::Qos::Urllc : dsm::Qos::Embb, static_cast<std::uint16_t>(cnc ? 40 : 60),
                           cnc ? 0U : 1U};
  if (decl) {
    if (decl->requested_mhz) r.requested_mhz = static_cast<std::uint16_t>(*decl->requested_mhz);
    if (decl->qos) r.qos = dsm::parse_qos(*decl->qos).value_or(r.qos);
    if (decl->priority) r.priority = *decl->priority;
  }
  return r;
}

Testbed::Testbed(sim::Scenario scenario, TestbedOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      kernel_(scenario_.topology, scenario_.seed),
      kira_(kernel_, options_.kira),
      sm_(kira_, scenario_.sm_host, options_.sm) {
  for (const auto& [id, master] : scenario_.attachments) {
    auto it = scenario_.subnets.find(id);
    const sim::SubnetDecl* decl = it == scenario_.subnets.end() ? nullptr : &it->second;
    const std::string profile = resolve_profile(id, decl);
    auto devices = profile == "cnc" ? subnet::cnc_devices() : subnet::sensor_devices();
    auto rt = std::unique_ptr<SubnetRuntime>(new SubnetRuntime{
        id, master, profile, subnet::Snc(resolve_requirement(id, decl), options_.snc),
        subnet::TokenSubnet(std::move(devices), options_.mac), true, false, 0, {}});
    SubnetRuntime* raw = rt.get();
    kira_.bind(master, static_cast<std::uint16_t>(kSncPortBase + id.value),
               [this, raw](sim::NodeRef, const kira::ControlMessage& m) { on_app_message(*raw, m); });
    subnets_.emplace(id, std::move(rt));
  }
  for (const sim::NetEvent& e : scenario_.events) {
    kernel_.schedule(e);
  }
  kernel_.on_net_event([this](const sim::NetEvent& e) { on_net_event(e); });
}

const SubnetRuntime* Testbed::subnet(sim::SubnetId id) const {
  auto it = subnets_.find(id);
  return it == subnets_.end() ? nullptr : it->second.get();
}

void Testbed::emit(std::string event, std::string details) {
  kernel_.emit(kModule, std::move(event), std::move(details));
}

void Testbed::violation(std::string what) {
  kernel_.emit("testbed", "INVARIANT_VIOLATION", what);
  violations_.push_back(std::move(what));
}

void Testbed::start() {
  if (started_) return;
  started_ = true;
  kira_.start();
  sm_.start();
  for (auto& [id, s] : subnets_) refresh_power(*s);
  const auto now = kernel_.now();
  kernel_.schedule_timer(now + options_.snc_tick_ms, sim::TimerClass::Controller, 0, [this] { snc_tick(); });
  kernel_.schedule_timer(now + options_.mac_tick_ms, sim::TimerClass::Subnet, 0, [this] { mac_tick(); });
  kernel_.schedule_timer(now + options_.metrics_period_ms, sim::TimerClass::Metrics, 0, [this] { metrics_tick(); });
}

void Testbed::run_until(sim::VirtualTime t) {
  start();
  kernel_.run_until(t);
}

void Testbed::on_net_event(const sim::NetEvent& e) {
  if (const auto* sid = std::get_if<sim::SubnetId>(&e.target)) {
    auto it = subnets_.find(*sid);
    if (it == subnets_.end()) return;
    it->second->switched_on = e.kind == sim::EventKind::SubnetPowerOn;
    refresh_power(*it->second);
  } else if (const auto* node = std::get_if<sim::NodeRef>(&e.target)) {
    for (auto& [id, s] : subnets_) {
      if (s->master == *node) refresh_power(*s);
    }
  }
}

void Testbed::refresh_power(SubnetRuntime& s) {
  if (!started_) return;
  const bool want = s.switched_on && kernel_.topology().node_up(s.master);
  if (want == s.running) return;
  s.running = want;
  const auto now = kernel_.now();
  if (want) {
    emit("POWER_ON", fmt::format("subnet={} master={}", s.id.value, s.master.value));
    s.mac.power_on(to_ns(now));
    execute(s, s.snc.power_on(now));
  } else {
    emit("POWER_OFF", fmt::format("subnet={} master={}", s.id.value, s.master.value));
    s.snc.power_off();
    s.mac.power_off(to_ns(now));
    s.mac.set_band({}, to_ns(now));
  }
}

void Testbed::send_app(SubnetRuntime& s, const kira::DhtValue& to, const dsm::wire::Message& message,
                       kira::KiraNetwork::OutcomeHandler on_outcome) {
  kira::ControlMessage m;
  m.src = kira_.id_of(s.master);
  m.dst = to.node;
  m.ttl = kira_.config().max_hops;
  m.kind = kira::MessageKind::App;
  m.src_port = static_cast<std::uint16_t>(kSncPortBase + s.id.value);
  m.dst_port = to.port;
  m.payload = dsm::wire::encode(message);
  kira_.send(std::move(m), std::move(on_outcome));
}

void Testbed::execute(SubnetRuntime& s, std::vector<subnet::SncAction> actions) {
  const auto before = s.snc.phase();
  for (auto& a : actions) {
    std::visit(
        overloaded{
            [&](const subnet::action::Lookup&) {
              auto rec = kira_.dht_get(s.master, dsm::kSmKey);
              execute(s, s.snc.on_lookup(rec, kernel_.now()));
            },
            [&](const subnet::action::SendRegister& r) {
              const auto& q = r.requirement;
              send_app(s, r.sm,
                       dsm::wire::Register{q.subnet.value, q.qos, static_cast<std::uint8_t>(q.requested_mhz),
                                           static_cast<std::uint8_t>(q.priority)});
            },
            [&](const subnet::action::SendHeartbeat& h) {
              SubnetRuntime* raw = &s;
              send_app(s, h.sm, dsm::wire::Heartbeat{s.id.value, static_cast<std::uint32_t>(h.version)},
                       [this, raw](const kira::RouteResult& r) {
                         if (!raw->running) return;
                         execute(*raw, raw->snc.on_heartbeat_outcome(std::holds_alternative<kira::Delivered>(r),
                                                                    kernel_.now()));
                       });
            },
            [&](const subnet::action::SendAck& ack) {
              // Acknowledge only once the new band is on air.
              const auto now = kernel_.now();
              const auto at_ms = (std::max(s.ack_not_before, to_ns(now)) + 999'999) / 1'000'000;
              const dsm::wire::Message msg = dsm::wire::Ack{static_cast<std::uint32_t>(ack.version)};
              if (at_ms <= now) {
                send_app(s, ack.sm, msg);
              } else {
                SubnetRuntime* raw = &s;
                kernel_.schedule_timer(at_ms, sim::TimerClass::Controller, 1 + s.id.value,
                                       [this, raw, to = ack.sm, msg] {
                                         if (raw->running) send_app(*raw, to, msg);
                                       });
              }
            },
            [&](const subnet::action::ApplyBand& b) {
              s.ack_not_before = s.mac.set_band(b.band, to_ns(kernel_.now()));
              emit("APPLY_BAND", fmt::format("subnet={} v={} band={} width={} effective_us={}", s.id.value,
                                             b.version, b.band.str(), b.band.width(), s.ack_not_before / 1000));
            },
        },
        a);
  }
  if (s.snc.phase() != before) {
    emit("SNC_PHASE", fmt::format("subnet={} {}->{}", s.id.value, subnet::to_string(before),
                                  subnet::to_string(s.snc.phase())));
  }
}

void Testbed::on_app_message(SubnetRuntime& s, const kira::ControlMessage& m) {
  if (!s.running) return;
  dsm::wire::Message msg;
  try {
    msg = dsm::wire::decode(m.payload);
  } catch (const dsm::wire::DecodeError& e) {
    emit("BAD_MESSAGE", fmt::format("subnet={} {}", s.id.value, e.what()));
    return;
  }
  const auto now = kernel_.now();
  if (const auto* g = std::get_if<dsm::wire::Grant>(&msg)) {
    execute(s, s.snc.on_grant(g->version, {g->low, g->high}, now));
  } else if (const auto* r = std::get_if<dsm::wire::Reconfigure>(&msg)) {
    execute(s, s.snc.on_reconfigure(r->version, {r->low, r->high}, now));
  } else if (std::holds_alternative<dsm::wire::Reregister>(msg)) {
    execute(s, s.snc.on_reregister(now));
  }
}

void Testbed::snc_tick() {
  const auto now = kernel_.now();
  for (auto& [id, s] : subnets_) {
    if (s->running) execute(*s, s->snc.tick(now));
  }
  kernel_.schedule_timer(now + options_.snc_tick_ms, sim::TimerClass::Controller, 0, [this] { snc_tick(); });
}

void Testbed::mac_tick() {
  const auto now = kernel_.now();
  for (auto& [id, s] : subnets_) s->mac.advance_to(to_ns(now));
  kernel_.schedule_timer(now + options_.mac_tick_ms, sim::TimerClass::Subnet, 0, [this] { mac_tick(); });
}

void Testbed::metrics_tick() {
  const auto now = kernel_.now();
  const auto from = now - options_.metrics_period_ms;
  for (auto& [id, s] : subnets_) {
    s->mac.advance_to(to_ns(now));
    s->last_metrics = subnet::collect_metrics(s->mac, to_ns(from), to_ns(now));
    metrics_.push_back({now, id, s->mac.band().width(), s->last_metrics});

    const double cap = subnet::capacity_mbps({0, s->mac.max_width_between(to_ns(from), to_ns(now))});
    if (s->last_metrics.throughput_mbps > cap * (1 + 1e-9) + 1e-9) {
      violation(fmt::format("subnet {} throughput {:.3f} Mbps above capacity {:.3f}", id.value,
                            s->last_metrics.throughput_mbps, cap));
    }
  }
  check_invariants();
  kernel_.schedule_timer(now + options_.metrics_period_ms, sim::TimerClass::Metrics, 0, [this] { metrics_tick(); });
}

void Testbed::check_invariants() {
  const auto& mgr = sm_.manager();
  std::vector<dsm::SubnetRequirement> live;
  for (const auto& [id, sess] : mgr.sessions()) {
    if (sess.status == dsm::SessionStatus::Live) live.push_back(sess.requirement);
  }
  for (auto& v : dsm::plan_violations(mgr.plan(), live)) violation("plan: " + v);
  if (mgr.plan().version < seen_plan_version_) {
    violation(fmt::format("plan version went back from {} to {}", seen_plan_version_, mgr.plan().version));
  }
  seen_plan_version_ = mgr.plan().version;

  for (auto& [id, s] : subnets_) {
    auto& seen = seen_versions_[id];
    if (s->snc.version() < seen) {
      violation(fmt::format("subnet {} version went back from {} to {}", id.value, seen, s->snc.version()));
    }
    seen = s->snc.version();
    const auto t = s->mac.totals();
    if (t.generated != t.delivered + t.queued + t.dropped) {
      violation(fmt::format("subnet {} frame conservation: generated {} != {} + {} + {}", id.value, t.generated,
                            t.delivered, t.queued, t.dropped));
    }
  }
}

std::string Testbed::metrics_csv() const {
  std::string out = subnet::metrics_csv_header() + "\n";
  for (const auto& r : metrics_) {
    out += subnet::metrics_csv_row(r.t, r.subnet.value, r.width_mhz, r.metrics) + "\n";
  }
  return out;
}

}  // namespace nin::testbed
