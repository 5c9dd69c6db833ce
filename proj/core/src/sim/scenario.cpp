#include "nin/sim/scenario.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

namespace nin::sim {

ScenarioError::ScenarioError(std::string message, std::string field, std::optional<int> line,
                             std::optional<int> column)
    : std::runtime_error([&] {
        if (line) {
          return fmt::format("line {}, column {}: {}: {}", *line, column.value_or(0), field, message);
        }
        return fmt::format("{}: {}", field, message);
      }()),
      field_(std::move(field)),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& at, const std::string& field, const std::string& message) {
  const YAML::Mark mark = at.Mark();
  if (mark.is_null()) {
    throw ScenarioError(message, field);
  }
  throw ScenarioError(message, field, mark.line + 1, mark.column + 1);
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) {
    fail(node, field, "expected a scalar");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, field, fmt::format("cannot interpret '{}'", node.Scalar()));
  }
}

NodeRef node_ref(const YAML::Node& node, const std::string& field) {
  return NodeRef{scalar<std::uint32_t>(node, field)};
}

SubnetId subnet_id(const YAML::Node& node, const std::string& field) {
  const auto value = scalar<std::uint32_t>(node, field);
  if (value > 0xFFFF) {
    fail(node, field, "subnet id exceeds 16 bits");
  }
  return SubnetId{static_cast<std::uint16_t>(value)};
}

EventTarget parse_target(EventKind kind, const YAML::Node& node, const std::string& field) {
  switch (kind) {
    case EventKind::NodeUp:
    case EventKind::NodeDown:
      return node_ref(node, field);
    case EventKind::SubnetPowerOn:
    case EventKind::SubnetPowerOff:
      return subnet_id(node, field);
    case EventKind::LinkUp:
    case EventKind::LinkDown:
      if (node.IsSequence() && node.size() == 2) {
        return LinkRef::make(node_ref(node[0], field), node_ref(node[1], field));
      }
      if (node.IsScalar()) {
        const std::string text = node.Scalar();
        const auto dash = text.find('-');
        if (dash != std::string::npos) {
          try {
            return LinkRef::make(NodeRef{static_cast<std::uint32_t>(std::stoul(text.substr(0, dash)))},
                                 NodeRef{static_cast<std::uint32_t>(std::stoul(text.substr(dash + 1)))});
          } catch (const std::exception&) {
          }
        }
      }
      fail(node, field, "link target must be [a, b] or \"a-b\"");
  }
  fail(node, field, "unknown event kind");
}

NetEvent parse_event(const YAML::Node& node, const std::string& field) {
  YAML::Node t, kind, target;
  if (node.IsSequence() && node.size() == 3) {
    t = node[0];
    kind = node[1];
    target = node[2];
  } else if (node.IsMap()) {
    t = node["t"];
    kind = node["kind"];
    target = node["target"];
    if (!t || !kind || !target) {
      fail(node, field, "event needs t, kind and target");
    }
  } else {
    fail(node, field, "event must be [t, kind, target] or a map");
  }
  NetEvent event;
  event.time = scalar<VirtualTime>(t, field + ".t");
  const auto parsed = parse_event_kind(scalar<std::string>(kind, field + ".kind"));
  if (!parsed) {
    fail(kind, field + ".kind", fmt::format("unknown event kind '{}'", kind.Scalar()));
  }
  event.kind = *parsed;
  event.target = parse_target(event.kind, target, field + ".target");
  if (event.time < 0) {
    fail(t, field + ".t", "event time must be >= 0");
  }
  return event;
}

Scenario parse(const YAML::Node& root) {
  if (!root.IsMap()) {
    fail(root, "<root>", "scenario must be a mapping");
  }
  Scenario s;

  const YAML::Node nodes = root["nodes"];
  if (!nodes) {
    throw ScenarioError("missing section", "nodes");
  }
  try {
    if (nodes.IsScalar()) {
      const auto count = scalar<std::uint32_t>(nodes, "nodes");
      for (std::uint32_t i = 0; i < count; ++i) {
        s.topology.add_node(NodeRef{i});
      }
    } else if (nodes.IsSequence()) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        s.topology.add_node(node_ref(nodes[i], fmt::format("nodes[{}]", i)));
      }
    } else if (!nodes.IsNull()) {
      fail(nodes, "nodes", "expected a node count or a list of node ids");
    }
  } catch (const TopologyError& e) {
    fail(nodes, "nodes", e.what());
  }

  if (const YAML::Node links = root["links"]) {
    if (!links.IsSequence() && !links.IsNull()) {
      fail(links, "links", "expected a list of [a, b, latency_ms]");
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string field = fmt::format("links[{}]", i);
      const YAML::Node link = links[i];
      if (!link.IsSequence() || link.size() != 3) {
        fail(link, field, "expected [a, b, latency_ms]");
      }
      try {
        s.topology.add_link(node_ref(link[0], field), node_ref(link[1], field),
                            scalar<VirtualTime>(link[2], field + ".latency_ms"));
      } catch (const TopologyError& e) {
        fail(link, field, e.what());
      }
    }
  }

  const YAML::Node sm_host = root["sm_host"];
  if (!sm_host) {
    throw ScenarioError("exactly one SM host must be declared", "sm_host");
  }
  if (sm_host.IsSequence()) {
    fail(sm_host, "sm_host", "exactly one SM host must be declared");
  }
  s.sm_host = node_ref(sm_host, "sm_host");

  if (const YAML::Node attachments = root["attachments"]) {
    if (!attachments.IsMap() && !attachments.IsNull()) {
      fail(attachments, "attachments", "expected a map of subnet: node");
    }
    for (const auto& kv : attachments) {
      const SubnetId id = subnet_id(kv.first, "attachments");
      if (!s.attachments.emplace(id, node_ref(kv.second, fmt::format("attachments.{}", id.value))).second) {
        fail(kv.first, "attachments", fmt::format("duplicate subnet {}", id.value));
      }
    }
  }

  if (const YAML::Node subnets = root["subnets"]) {
    if (!subnets.IsMap() && !subnets.IsNull()) {
      fail(subnets, "subnets", "expected a map of subnet: {profile, ...}");
    }
    for (const auto& kv : subnets) {
      const SubnetId id = subnet_id(kv.first, "subnets");
      const std::string field = fmt::format("subnets.{}", id.value);
      const YAML::Node body = kv.second;
      if (!body.IsMap()) {
        fail(body, field, "expected a map");
      }
      SubnetDecl decl;
      if (body["profile"]) decl.profile = scalar<std::string>(body["profile"], field + ".profile");
      if (body["requested_mhz"]) decl.requested_mhz = scalar<unsigned>(body["requested_mhz"], field + ".requested_mhz");
      if (body["qos"]) decl.qos = scalar<std::string>(body["qos"], field + ".qos");
      if (body["priority"]) decl.priority = scalar<unsigned>(body["priority"], field + ".priority");
      if (decl.profile != "" && decl.profile != "cnc" && decl.profile != "sensor") {
        fail(body["profile"], field + ".profile", fmt::format("unknown profile '{}'", decl.profile));
      }
      if (decl.qos && *decl.qos != "urllc" && *decl.qos != "embb") {
        fail(body["qos"], field + ".qos", fmt::format("unknown qos '{}'", *decl.qos));
      }
      s.subnets.emplace(id, std::move(decl));
    }
  }

  if (const YAML::Node events = root["events"]) {
    if (!events.IsSequence() && !events.IsNull()) {
      fail(events, "events", "expected a list of events");
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
      s.events.push_back(parse_event(events[i], fmt::format("events[{}]", i)));
    }
  }

  if (const YAML::Node seed = root["seed"]) s.seed = scalar<std::uint64_t>(seed, "seed");
  if (const YAML::Node duration = root["duration_ms"]) {
    s.duration_ms = scalar<VirtualTime>(duration, "duration_ms");
  }

  // Field-level checks that benefit from a source location.
  for (const auto& kv : root["attachments"]) {
    const NodeRef node = NodeRef{kv.second.as<std::uint32_t>()};
    if (!s.topology.has_node(node)) {
      fail(kv.second, fmt::format("attachments.{}", kv.first.Scalar()),
           fmt::format("dangling attachment: node {} is not in the topology", node.value));
    }
  }
  return s;
}

}  // namespace

void validate_scenario(const Scenario& s) {
  if (s.topology.node_count() == 0) {
    throw ScenarioError("empty topology", "nodes");
  }
  if (!s.topology.has_node(s.sm_host)) {
    throw ScenarioError(fmt::format("dangling SM host: node {} is not in the topology", s.sm_host.value), "sm_host");
  }
  for (const auto& [subnet, node] : s.attachments) {
    if (!s.topology.has_node(node)) {
      throw ScenarioError(fmt::format("dangling attachment: node {} is not in the topology", node.value),
                          fmt::format("attachments.{}", subnet.value));
    }
  }
  for (const auto& [subnet, decl] : s.subnets) {
    if (!s.attachments.contains(subnet)) {
      throw ScenarioError(fmt::format("subnet {} has no attachment", subnet.value),
                          fmt::format("subnets.{}", subnet.value));
    }
    if (decl.requested_mhz && (*decl.requested_mhz == 0 || *decl.requested_mhz > 100)) {
      throw ScenarioError("requested_mhz must be in 1..100", fmt::format("subnets.{}.requested_mhz", subnet.value));
    }
  }
  if (s.duration_ms < 0) {
    throw ScenarioError("duration must be >= 0", "duration_ms");
  }
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const NetEvent& e = s.events[i];
    const std::string field = fmt::format("events[{}]", i);
    if (e.time < 0) {
      throw ScenarioError("event time must be >= 0", field);
    }
    if (!target_matches_kind(e.kind, e.target)) {
      throw ScenarioError("target does not match the event kind", field);
    }
    if (const auto* node = std::get_if<NodeRef>(&e.target); node && !s.topology.has_node(*node)) {
      throw ScenarioError(fmt::format("dangling event target: node {}", node->value), field);
    }
    if (const auto* link = std::get_if<LinkRef>(&e.target); link && !s.topology.has_link(link->a, link->b)) {
      throw ScenarioError(fmt::format("dangling event target: link {}-{}", link->a.value, link->b.value), field);
    }
    if (const auto* subnet = std::get_if<SubnetId>(&e.target); subnet && !s.attachments.contains(*subnet)) {
      throw ScenarioError(fmt::format("dangling event target: subnet {}", subnet->value), field);
    }
  }
}

Scenario load_scenario(std::string_view source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(source));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError(e.msg, "<syntax>", e.mark.line + 1, e.mark.column + 1);
  }
  if (!root || root.IsNull()) {
    throw ScenarioError("empty topology", "nodes");
  }
  Scenario s = parse(root);
  validate_scenario(s);
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(fmt::format("cannot open scenario file '{}'", path.string()), "<file>");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_scenario(buffer.str());
}

std::string to_yaml(const Scenario& s) {
  std::string out;
  out += fmt::format("seed: {}\nduration_ms: {}\nsm_host: {}\nnodes: [", s.seed, s.duration_ms, s.sm_host.value);
  bool first = true;
  for (const auto& [node, state] : s.topology.nodes()) {
    out += fmt::format("{}{}", first ? "" : ", ", node.value);
    first = false;
  }
  out += "]\nlinks:\n";
  for (const auto& [ref, link] : s.topology.links()) {
    out += fmt::format("  - [{}, {}, {}]\n", ref.a.value, ref.b.value, link.latency_ms);
  }
  out += "attachments:\n";
  for (const auto& [subnet, node] : s.attachments) {
    out += fmt::format("  {}: {}\n", subnet.value, node.value);
  }
  if (!s.subnets.empty()) {
    out += "subnets:\n";
    for (const auto& [subnet, decl] : s.subnets) {
      out += fmt::format("  {}: {{profile: {}", subnet.value, decl.profile.empty() ? "cnc" : decl.profile);
      if (decl.requested_mhz) out += fmt::format(", requested_mhz: {}", *decl.requested_mhz);
      if (decl.qos) out += fmt::format(", qos: {}", *decl.qos);
      if (decl.priority) out += fmt::format(", priority: {}", *decl.priority);
      out += "}\n";
    }
  }
  out += "events:\n";
  for (const NetEvent& e : s.events) {
    struct TargetText {
      std::string operator()(NodeRef n) const { return std::to_string(n.value); }
      std::string operator()(LinkRef l) const { return fmt::format("[{}, {}]", l.a.value, l.b.value); }
      std::string operator()(SubnetId id) const { return std::to_string(id.value); }
    };
    out += fmt::format("  - [{}, {}, {}]\n", e.time, to_string(e.kind), std::visit(TargetText{}, e.target));
  }
  return out;
}

}  // namespace nin::sim
