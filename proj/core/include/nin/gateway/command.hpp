#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "nin/sim/kernel.hpp"
#include "nin/sim/scenario.hpp"

namespace nin::gateway {

struct Command {
  enum class Kind { SubnetPower, NodePower, Shutdown };
  Kind kind = Kind::SubnetPower;
  std::uint32_t target = 0;
  bool on = true;
};

struct CommandResult {
  bool accepted = false;
  std::string reason;
};

/// `{"kind":"subnet_power","subnet":2,"on":false}`,
/// `{"kind":"node_power","node":3,"on":true}` or `{"kind":"shutdown"}`.
/// Returns the reason text on malformed input.
std::variant<Command, std::string> parse_command(std::string_view body);

/// Validates against the scenario and injects the matching network event.
/// Safe to call from any thread.
CommandResult submit_command(const Command& command, const sim::Scenario& scenario, sim::Kernel& kernel,
                             std::atomic<bool>& shutdown);

std::string to_json(const CommandResult& result);

}  // namespace nin::gateway
