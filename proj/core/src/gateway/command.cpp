#include "nin/gateway/command.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace nin::gateway {

using nlohmann::json;

std::variant<Command, std::string> parse_command(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    return std::string("malformed json: ") + e.what();
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    return std::string("missing string field 'kind'");
  }
  const auto kind = j["kind"].get<std::string>();
  Command c;
  if (kind == "shutdown") {
    c.kind = Command::Kind::Shutdown;
    return c;
  }
  const char* field = nullptr;
  if (kind == "subnet_power") {
    c.kind = Command::Kind::SubnetPower;
    field = "subnet";
  } else if (kind == "node_power") {
    c.kind = Command::Kind::NodePower;
    field = "node";
  } else {
    return fmt::format("unknown kind '{}'", kind);
  }
  if (!j.contains(field) || !j[field].is_number_unsigned()) {
    return fmt::format("missing unsigned field '{}'", field);
  }
  if (!j.contains("on") || !j["on"].is_boolean()) {
    return std::string("missing boolean field 'on'");
  }
  c.target = j[field].get<std::uint32_t>();
  c.on = j["on"].get<bool>();
  return c;
}

CommandResult submit_command(const Command& c, const sim::Scenario& scenario, sim::Kernel& kernel,
                             std::atomic<bool>& shutdown) {
  switch (c.kind) {
    case Command::Kind::Shutdown:
      shutdown = true;
      return {true, {}};
    case Command::Kind::SubnetPower: {
      if (c.target > UINT16_MAX || !scenario.attachments.contains(sim::SubnetId{static_cast<std::uint16_t>(c.target)})) {
        return {false, fmt::format("unknown subnet {}", c.target)};
      }
      kernel.inject(c.on ? sim::EventKind::SubnetPowerOn : sim::EventKind::SubnetPowerOff,
                    sim::SubnetId{static_cast<std::uint16_t>(c.target)});
      return {true, {}};
    }
    case Command::Kind::NodePower: {
      if (!scenario.topology.has_node(sim::NodeRef{c.target})) {
        return {false, fmt::format("unknown node {}", c.target)};
      }
      kernel.inject(c.on ? sim::EventKind::NodeUp : sim::EventKind::NodeDown, sim::NodeRef{c.target});
      return {true, {}};
    }
  }
  return {false, "unsupported command"};
}

std::string to_json(const CommandResult& r) {
  json j{{"accepted", r.accepted}};
  if (!r.accepted) j["reason"] = r.reason;
  return j.dump();
}

}  // namespace nin::gateway
