#include "nin/sim/event.hpp"

#include <array>

#include <fmt/format.h>

namespace nin::sim {

namespace {

struct KindName {
  EventKind kind;
  std::string_view camel;
  std::string_view snake;
};

constexpr std::array<KindName, 6> kKindNames{{
    {EventKind::NodeUp, "NodeUp", "node_up"},
    {EventKind::NodeDown, "NodeDown", "node_down"},
    {EventKind::LinkUp, "LinkUp", "link_up"},
    {EventKind::LinkDown, "LinkDown", "link_down"},
    {EventKind::SubnetPowerOn, "SubnetPowerOn", "subnet_power_on"},
    {EventKind::SubnetPowerOff, "SubnetPowerOff", "subnet_power_off"},
}};

}  // namespace

std::string_view to_string(EventKind kind) {
  return kKindNames.at(static_cast<std::size_t>(kind)).camel;
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  for (const auto& entry : kKindNames) {
    if (text == entry.camel || text == entry.snake) {
      return entry.kind;
    }
  }
  return std::nullopt;
}

bool target_matches_kind(EventKind kind, const EventTarget& target) {
  switch (kind) {
    case EventKind::NodeUp:
    case EventKind::NodeDown:
      return std::holds_alternative<NodeRef>(target);
    case EventKind::LinkUp:
    case EventKind::LinkDown:
      return std::holds_alternative<LinkRef>(target);
    case EventKind::SubnetPowerOn:
    case EventKind::SubnetPowerOff:
      return std::holds_alternative<SubnetId>(target);
  }
  return false;
}

std::string describe_target(const EventTarget& target) {
  struct Visitor {
    std::string operator()(NodeRef n) const { return fmt::format("node={}", n.value); }
    std::string operator()(LinkRef l) const { return fmt::format("link={}-{}", l.a.value, l.b.value); }
    std::string operator()(SubnetId s) const { return fmt::format("subnet={}", s.value); }
  };
  return std::visit(Visitor{}, target);
}

std::uint64_t target_key(const EventTarget& target) {
  struct Visitor {
    std::uint64_t operator()(NodeRef n) const { return n.value; }
    std::uint64_t operator()(LinkRef l) const {
      return (static_cast<std::uint64_t>(l.a.value) << 32) | l.b.value;
    }
    std::uint64_t operator()(SubnetId s) const { return s.value; }
  };
  return std::visit(Visitor{}, target);
}

}  // namespace nin::sim
