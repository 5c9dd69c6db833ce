#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nin/sim/event.hpp"
#include "nin/sim/topology.hpp"

namespace nin::sim {

/// Parse or validation failure. line/column are 1-based when known.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string message, std::string field, std::optional<int> line = {},
                std::optional<int> column = {});

  const std::string& field() const { return field_; }
  std::optional<int> line() const { return line_; }
  std::optional<int> column() const { return column_; }

 private:
  std::string field_;
  std::optional<int> line_;
  std::optional<int> column_;
};

/// Per-subnet overrides; anything left empty falls back to the profile default.
struct SubnetDecl {
  std::string profile;
  std::optional<unsigned> requested_mhz;
  std::optional<std::string> qos;
  std::optional<unsigned> priority;
};

struct Scenario {
  TopologyGraph topology;
  std::map<SubnetId, NodeRef> attachments;
  NodeRef sm_host;
  std::vector<NetEvent> events;
  std::uint64_t seed = 0;
  VirtualTime duration_ms = 60'000;
  std::map<SubnetId, SubnetDecl> subnets;
};

/// Parses the YAML scenario format and validates it.
Scenario load_scenario(std::string_view source);
Scenario load_scenario_file(const std::filesystem::path& path);

/// Throws ScenarioError naming the first violated invariant.
void validate_scenario(const Scenario& scenario);

/// Serializes back to the YAML scenario format (events in stored order).
std::string to_yaml(const Scenario& scenario);

}  // namespace nin::sim
