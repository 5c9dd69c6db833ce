#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nin/dsm/sm_service.hpp"
#include "nin/kira/network.hpp"
#include "nin/sim/kernel.hpp"
#include "nin/sim/scenario.hpp"
#include "nin/subnet/metrics.hpp"
#include "nin/subnet/snc.hpp"
#include "nin/subnet/token_subnet.hpp"

namespace nin::testbed {

struct TestbedOptions {
  kira::KiraConfig kira;
  dsm::SmServiceConfig sm;
  subnet::SncConfig snc;
  subnet::TokenSubnetConfig mac;
  sim::VirtualTime snc_tick_ms = 100;
  sim::VirtualTime mac_tick_ms = 10;
  sim::VirtualTime metrics_period_ms = 1000;
};

/// SNC port on a master node is kSncPortBase + subnet id.
inline constexpr std::uint16_t kSncPortBase = 1000;

/// Requirement a subnet declaration resolves to. Undeclared odd ids are
/// CNC cells, even ids sensor cells.
dsm::SubnetRequirement resolve_requirement(sim::SubnetId id, const sim::SubnetDecl* decl);
std::string resolve_profile(sim::SubnetId id, const sim::SubnetDecl* decl);

struct SubnetRuntime {
  sim::SubnetId id;
  sim::NodeRef master;
  std::string profile;
  subnet::Snc snc;
  subnet::TokenSubnet mac;
  /// Operator switch; the cell runs only while this is set and the master is up.
  bool switched_on = true;
  bool running = false;
  subnet::Nanos ack_not_before = 0;
  subnet::SubnetMetrics last_metrics;
};

struct MetricsRow {
  sim::VirtualTime t = 0;
  sim::SubnetId subnet;
  std::uint16_t width_mhz = 0;
  subnet::SubnetMetrics metrics;
};

/// The whole system on one kernel: overlay, SM, one SNC plus token MAC
/// per attached subnet, scripted events and periodic KPI collection.
class Testbed {
 public:
  explicit Testbed(sim::Scenario scenario, TestbedOptions options = {});
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  /// Starts all periodic activity at the current virtual time. Idempotent.
  void start();
  void run_until(sim::VirtualTime t);

  sim::Kernel& kernel() { return kernel_; }
  const sim::Kernel& kernel() const { return kernel_; }
  kira::KiraNetwork& kira() { return kira_; }
  const kira::KiraNetwork& kira() const { return kira_; }
  dsm::SmService& sm() { return sm_; }
  const dsm::SmService& sm() const { return sm_; }
  const sim::Scenario& scenario() const { return scenario_; }
  const std::map<sim::SubnetId, std::unique_ptr<SubnetRuntime>>& subnets() const { return subnets_; }
  const SubnetRuntime* subnet(sim::SubnetId id) const;

  const std::vector<MetricsRow>& metrics() const { return metrics_; }
  std::string metrics_csv() const;
  /// Broken invariants observed so far, one line each.
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  void on_net_event(const sim::NetEvent& event);
  void refresh_power(SubnetRuntime& s);
  void execute(SubnetRuntime& s, std::vector<subnet::SncAction> actions);
  void send_app(SubnetRuntime& s, const kira::DhtValue& to, const dsm::wire::Message& message,
                kira::KiraNetwork::OutcomeHandler on_outcome = {});
  void on_app_message(SubnetRuntime& s, const kira::ControlMessage& message);
  void snc_tick();
  void mac_tick();
  void metrics_tick();
  void check_invariants();
  void violation(std::string what);
  void emit(std::string event, std::string details);

  sim::Scenario scenario_;
  TestbedOptions options_;
  sim::Kernel kernel_;
  kira::KiraNetwork kira_;
  dsm::SmService sm_;
  std::map<sim::SubnetId, std::unique_ptr<SubnetRuntime>> subnets_;
  std::map<sim::SubnetId, std::uint64_t> seen_versions_;
  std::uint64_t seen_plan_version_ = 0;
  std::vector<MetricsRow> metrics_;
  std::vector<std::string> violations_;
  bool started_ = false;
};

}  // namespace nin::testbed
