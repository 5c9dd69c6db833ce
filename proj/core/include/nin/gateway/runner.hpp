#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nin/gateway/command.hpp"
#include "nin/gateway/event_hub.hpp"
#include "nin/gateway/snapshot.hpp"
#include "nin/testbed/testbed.hpp"

namespace nin::gateway {

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<sim::VirtualTime> duration_ms;
  /// Listen address; headless when empty.
  std::optional<std::string> serve;
  bool realtime = false;
  /// Virtual ms per wall ms in realtime mode.
  double speed = 1.0;
  sim::VirtualTime step_ms = 100;
  std::optional<std::filesystem::path> metrics_out;
  std::optional<std::filesystem::path> log_out;
  std::optional<std::filesystem::path> assets;
};

struct RunSummary {
  sim::VirtualTime end = 0;
  std::size_t log_records = 0;
  std::vector<std::string> violations;
  bool interrupted = false;
};

/// Drives a Testbed for the CLI and the HTTP gateway. The simulation runs
/// on the calling thread; commands may arrive from any thread.
class Runner {
 public:
  Runner(sim::Scenario scenario, RunOptions options);

  testbed::Testbed& testbed() { return testbed_; }
  SnapshotCell& cell() { return cell_; }
  EventHub& hub() { return hub_; }
  sim::VirtualTime duration() const { return duration_; }

  CommandResult command(const Command& command);
  /// Runs everything before t, then publishes the snapshot followed by the
  /// log frames emitted meanwhile.
  void advance_to(sim::VirtualTime t);
  /// Full run per the options; prints the listen address when serving.
  RunSummary run(std::ostream& status);
  void request_shutdown() { shutdown_ = true; }
  std::atomic<bool>& shutdown_flag() { return shutdown_; }

 private:
  void publish();
  void write_outputs();

  RunOptions options_;
  sim::VirtualTime duration_;
  testbed::Testbed testbed_;
  SnapshotCell cell_;
  EventHub hub_;
  std::mutex pending_mutex_;
  std::vector<std::string> pending_frames_;
  std::atomic<bool> shutdown_{false};
};

sim::Scenario apply_overrides(sim::Scenario scenario, const RunOptions& options);

}  // namespace nin::gateway
