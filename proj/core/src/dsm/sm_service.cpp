#include "nin/dsm/sm_service.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace nin::dsm {

namespace {
constexpr const char* kModule = "dsm";
}

SmService::SmService(kira::KiraNetwork& net, sim::NodeRef host, SmServiceConfig config)
    : net_(net),
      kernel_(net.kernel()),
      host_(host),
      config_(config),
      manager_(kDemoBand, config.heartbeat_period_ms, config.timeout_periods) {
  net_.bind(host_, kSmPort, [this](sim::NodeRef, const kira::ControlMessage& m) { on_message(m); });
  kernel_.on_net_event([this](const sim::NetEvent& e) {
    if (!started_ || !std::holds_alternative<sim::NodeRef>(e.target) || std::get<sim::NodeRef>(e.target) != host_) {
      return;
    }
    if (e.kind == sim::EventKind::NodeDown) {
      halt();
    } else if (e.kind == sim::EventKind::NodeUp) {
      boot();
    }
  });
}

void SmService::emit(std::string event, std::string details) {
  kernel_.emit(kModule, std::move(event), std::move(details));
}

void SmService::start() {
  if (started_) return;
  started_ = true;
  if (net_.is_up(host_)) boot();
}

void SmService::boot() {
  online_ = true;
  published_ = false;
  ++record_version_;
  emit("SM_START", fmt::format("node={} id={} record_v={}", host_.value, net_.id_of(host_).short_hex(),
                               record_version_));
  try_publish(config_.bootstrap_backoff_ms);
  const auto epoch = epoch_;
  kernel_.schedule_after(config_.failure_check_ms, sim::TimerClass::SpectrumManager, 0, [this, epoch] {
    if (epoch == epoch_) failure_check();
  });
}

void SmService::halt() {
  online_ = false;
  published_ = false;
  ++epoch_;
  const auto version = manager_.plan().version;
  manager_ = SpectrumManager(kDemoBand, config_.heartbeat_period_ms, config_.timeout_periods);
  manager_.resume_versions_after(version);
  addresses_.clear();
  pending_.clear();
  net_.unpublish(host_, kSmKey);
  emit("SM_STOP", fmt::format("node={}", host_.value));
}

void SmService::try_publish(sim::VirtualTime backoff) {
  kira::DhtRecord rec{std::string(kSmKey), {net_.id_of(host_), kSmPort}, config_.record_ttl_s, record_version_};
  if (net_.publish(host_, rec).ok()) {
    published_ = true;
    emit("SM_PUBLISHED", fmt::format("key={} v={}", kSmKey, record_version_));
    return;
  }
  emit("SM_PUBLISH_RETRY", fmt::format("key={} PutFailed retry_in={}ms", kSmKey, backoff));
  const auto epoch = epoch_;
  const auto next = std::min(backoff * 2, config_.bootstrap_backoff_cap_ms);
  kernel_.schedule_after(backoff, sim::TimerClass::SpectrumManager, 1, [this, epoch, next] {
    if (epoch == epoch_) try_publish(next);
  });
}

void SmService::failure_check() {
  auto report = manager_.detect_failures(kernel_.now());
  for (sim::SubnetId id : report.failed) {
    pending_.erase(id);
    emit("SUBNET_FAILED", fmt::format("subnet={} reason=heartbeat-timeout", id.value));
  }
  if (!report.failed.empty()) {
    log_plan();
    push(report.pushes);
  }
  const auto epoch = epoch_;
  kernel_.schedule_after(config_.failure_check_ms, sim::TimerClass::SpectrumManager, 0, [this, epoch] {
    if (epoch == epoch_) failure_check();
  });
}

void SmService::log_plan() {
  std::string bands;
  for (const auto& [id, band] : manager_.plan().assignments) {
    bands += fmt::format(" {}:{}", id.value, band.str());
  }
  emit("PLAN", fmt::format("v={}{}", manager_.plan().version, bands.empty() ? " empty" : bands));
}

void SmService::send(const Address& to, const wire::Message& message) {
  kira::ControlMessage m;
  m.src = net_.id_of(host_);
  m.dst = to.node;
  m.ttl = net_.config().max_hops;
  m.kind = kira::MessageKind::App;
  m.src_port = kSmPort;
  m.dst_port = to.port;
  m.payload = wire::encode(message);
  net_.send(std::move(m));
}

void SmService::on_message(const kira::ControlMessage& m) {
  if (!online_) return;
  wire::Message msg;
  try {
    msg = wire::decode(m.payload);
  } catch (const wire::DecodeError& e) {
    emit("BAD_MESSAGE", e.what());
    return;
  }
  const Address from{m.src, m.src_port};
  const auto now = kernel_.now();
  if (const auto* r = std::get_if<wire::Register>(&msg)) {
    const SubnetRequirement req{sim::SubnetId{r->subnet}, r->qos, r->requested_mhz, r->priority};
    const auto before = manager_.recomputes();
    Grant g;
    try {
      g = manager_.register_subnet(req, now);
    } catch (const InvalidRequirement& e) {
      emit("REGISTER_REJECTED", e.what());
      return;
    }
    addresses_[req.subnet] = from;
    pending_.erase(req.subnet);
    if (manager_.recomputes() != before) {
      emit("REGISTER", fmt::format("subnet={} qos={} requested={} granted={} width={} v={}", r->subnet,
                                   to_string(r->qos), r->requested_mhz, g.band.str(), g.band.width(), g.version));
      log_plan();
    }
    send(from, wire::Grant{static_cast<std::uint32_t>(g.version), g.band.low_mhz, g.band.high_mhz});
    push(g.pushes);
  } else if (const auto* h = std::get_if<wire::Heartbeat>(&msg)) {
    const sim::SubnetId id{h->subnet};
    if (!manager_.on_heartbeat(id, now)) {
      emit("HEARTBEAT_UNKNOWN", fmt::format("subnet={} hint=reregister", h->subnet));
      send(from, wire::Reregister{h->subnet});
    }
  } else if (const auto* a = std::get_if<wire::Ack>(&msg)) {
    for (auto it = pending_.begin(); it != pending_.end(); ++it) {
      auto addr = addresses_.find(it->first);
      if (addr == addresses_.end() || addr->second != from) continue;
      if (a->version >= it->second.version) {
        emit("ACK", fmt::format("subnet={} v={} band={}", it->first.value, a->version, it->second.band.str()));
        pending_.erase(it);
      }
      break;
    }
  } else if (const auto* d = std::get_if<wire::Deregister>(&msg)) {
    auto pushes = manager_.deregister(sim::SubnetId{d->subnet}, now);
    emit("DEREGISTER", fmt::format("subnet={}", d->subnet));
    pending_.erase(sim::SubnetId{d->subnet});
    log_plan();
    push(pushes);
  }
}

void SmService::push(const std::vector<Push>& pushes) {
  for (const Push& p : pushes) {
    pending_[p.subnet] = Pending{p.version, p.band, 0};
    transmit(p.subnet);
  }
}

void SmService::transmit(sim::SubnetId subnet) {
  Pending& p = pending_.at(subnet);
  ++p.attempts;
  emit("RECONFIGURE", fmt::format("subnet={} v={} band={} attempt={}", subnet.value, p.version, p.band.str(),
                                  p.attempts));
  if (auto addr = addresses_.find(subnet); addr != addresses_.end()) {
    send(addr->second, wire::Reconfigure{static_cast<std::uint32_t>(p.version), p.band.low_mhz, p.band.high_mhz});
  }
  const auto epoch = epoch_;
  const auto version = p.version;
  kernel_.schedule_after(config_.push_retry_ms, sim::TimerClass::SpectrumManager, 2 + subnet.value,
                         [this, epoch, subnet, version] {
                           if (epoch == epoch_) retry(subnet, version);
                         });
}

void SmService::retry(sim::SubnetId subnet, std::uint64_t version) {
  auto it = pending_.find(subnet);
  if (it == pending_.end() || it->second.version != version) return;
  if (it->second.attempts <= config_.push_retries) {
    transmit(subnet);
    return;
  }
  pending_.erase(it);
  emit("SUBNET_FAILED", fmt::format("subnet={} reason=push-unacked v={}", subnet.value, version));
  auto pushes = manager_.mark_failed(subnet, kernel_.now());
  log_plan();
  push(pushes);
}

}  // namespace nin::dsm
