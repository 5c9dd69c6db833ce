#include "nin/sim/kernel.hpp"

#include <fmt/format.h>

namespace nin::sim {

Kernel::Kernel(TopologyGraph topology, std::uint64_t seed) : topology_(std::move(topology)), seed_(seed) {}

void Kernel::schedule(const NetEvent& event) {
  if (event.time < now_) {
    throw MonotonicityError(
        fmt::format("event {} at t={} is before the current time {}", to_string(event.kind), event.time, now_));
  }
  if (!target_matches_kind(event.kind, event.target)) {
    throw std::invalid_argument(fmt::format("event {} has a mismatched target", to_string(event.kind)));
  }
  if (const auto* node = std::get_if<NodeRef>(&event.target); node && !topology_.has_node(*node)) {
    throw TopologyError(fmt::format("event targets unknown node {}", node->value));
  }
  if (const auto* link = std::get_if<LinkRef>(&event.target); link && !topology_.has_link(link->a, link->b)) {
    throw TopologyError(fmt::format("event targets unknown link {}-{}", link->a.value, link->b.value));
  }
  queue_.push(Entry{event.time, static_cast<std::uint8_t>(event.kind), target_key(event.target), next_seq_++, event, {}});
}

void Kernel::schedule_timer(VirtualTime at, TimerClass cls, std::uint64_t key, Callback callback) {
  if (at < now_) {
    throw MonotonicityError(fmt::format("timer at t={} is before the current time {}", at, now_));
  }
  queue_.push(Entry{at, static_cast<std::uint8_t>(cls), key, next_seq_++, std::nullopt, std::move(callback)});
}

void Kernel::inject(EventKind kind, EventTarget target) {
  std::lock_guard lock(inject_mutex_);
  injected_.emplace_back(kind, target);
}

void Kernel::drain_injected() {
  std::vector<std::pair<EventKind, EventTarget>> batch;
  {
    std::lock_guard lock(inject_mutex_);
    batch.swap(injected_);
  }
  for (auto& [kind, target] : batch) {
    schedule(NetEvent{now_, kind, target});
  }
}

std::vector<LogRecord> Kernel::step() {
  drain_injected();
  if (queue_.empty()) {
    return {};
  }
  Entry entry = queue_.top();
  queue_.pop();
  now_ = entry.time;
  const std::size_t before = log_.size();
  if (entry.net_event) {
    apply(*entry.net_event);
  } else {
    entry.callback();
  }
  const auto& records = log_.records();
  return {records.begin() + static_cast<std::ptrdiff_t>(before), records.end()};
}

const EventLog& Kernel::run_until(VirtualTime t) {
  drain_injected();
  while (!queue_.empty() && queue_.top().time <= t) {
    step();
  }
  if (t > now_) {
    now_ = t;
  }
  return log_;
}

void Kernel::advance_to(VirtualTime t) {
  drain_injected();
  while (!queue_.empty() && queue_.top().time < t) {
    step();
  }
  if (t > now_) {
    now_ = t;
  }
  drain_injected();
}

std::optional<VirtualTime> Kernel::next_event_time() const {
  if (queue_.empty()) {
    return std::nullopt;
  }
  return queue_.top().time;
}

void Kernel::emit(std::string module, std::string event, std::string details) {
  log_.append(LogRecord{now_, std::move(module), std::move(event), std::move(details)});
}

void Kernel::apply(const NetEvent& event) {
  switch (event.kind) {
    case EventKind::NodeUp:
    case EventKind::NodeDown:
      topology_.set_node_state(std::get<NodeRef>(event.target),
                               event.kind == EventKind::NodeUp ? Status::Up : Status::Down);
      break;
    case EventKind::LinkUp:
    case EventKind::LinkDown: {
      const auto link = std::get<LinkRef>(event.target);
      topology_.set_link_state(link.a, link.b, event.kind == EventKind::LinkUp ? Status::Up : Status::Down);
      break;
    }
    case EventKind::SubnetPowerOn:
    case EventKind::SubnetPowerOff:
      break;
  }
  emit("kernel", std::string(to_string(event.kind)), describe_target(event.target));
  for (const auto& handler : handlers_) {
    handler(event);
  }
}

}  // namespace nin::sim
