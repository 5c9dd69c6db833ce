#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "nin/sim/topology.hpp"
#include "nin/sim/types.hpp"

namespace nin::sim {

/// Declaration order is the tie-break rank for events at the same time.
enum class EventKind : std::uint8_t {
  NodeUp,
  NodeDown,
  LinkUp,
  LinkDown,
  SubnetPowerOn,
  SubnetPowerOff,
};

using EventTarget = std::variant<NodeRef, LinkRef, SubnetId>;

struct NetEvent {
  VirtualTime time = 0;
  EventKind kind = EventKind::NodeUp;
  EventTarget target = NodeRef{};

  bool operator==(const NetEvent&) const = default;
};

std::string_view to_string(EventKind kind);
/// Accepts snake_case ("subnet_power_off") and CamelCase ("SubnetPowerOff").
std::optional<EventKind> parse_event_kind(std::string_view text);

/// True when the target alternative matches what the kind operates on.
bool target_matches_kind(EventKind kind, const EventTarget& target);

std::string describe_target(const EventTarget& target);

/// Packs a target into one integer for ordering events of the same kind.
std::uint64_t target_key(const EventTarget& target);

}  // namespace nin::sim
