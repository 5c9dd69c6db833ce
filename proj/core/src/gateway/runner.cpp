#include "nin/gateway/runner.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "nin/gateway/api_server.hpp"

namespace nin::gateway {

sim::Scenario apply_overrides(sim::Scenario scenario, const RunOptions& options) {
  if (options.seed) scenario.seed = *options.seed;
  if (options.duration_ms) scenario.duration_ms = *options.duration_ms;
  return scenario;
}

Runner::Runner(sim::Scenario scenario, RunOptions options)
    : options_(std::move(options)),
      duration_(apply_overrides(scenario, options_).duration_ms),
      testbed_(apply_overrides(std::move(scenario), options_)) {
  testbed_.kernel().log().subscribe([this](const sim::LogRecord& r) {
    if (hub_.subscribers() == 0) return;
    std::lock_guard lock(pending_mutex_);
    pending_frames_.push_back(to_json(r));
  });
  cell_.store(capture(testbed_));
}

CommandResult Runner::command(const Command& c) {
  return submit_command(c, testbed_.scenario(), testbed_.kernel(), shutdown_);
}

void Runner::publish() {
  auto snap = capture(testbed_);
  const auto notice = fmt::format(R"({{"t":{},"module":"gateway","event":"SNAPSHOT","details":"plan_v={}"}})",
                                  snap.t, snap.plan_version);
  cell_.store(std::move(snap));
  std::vector<std::string> frames;
  {
    std::lock_guard lock(pending_mutex_);
    frames.swap(pending_frames_);
  }
  frames.push_back(notice);
  hub_.publish(frames);
}

void Runner::advance_to(sim::VirtualTime t) {
  testbed_.start();
  testbed_.kernel().advance_to(t);
  publish();
}

void Runner::write_outputs() {
  if (options_.metrics_out) {
    std::ofstream out(*options_.metrics_out);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", options_.metrics_out->string()));
    out << testbed_.metrics_csv();
  }
  if (options_.log_out) {
    std::ofstream out(*options_.log_out);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", options_.log_out->string()));
    out << testbed_.kernel().log().text();
  }
}

RunSummary Runner::run(std::ostream& status) {
  std::optional<ApiServer> server;
  if (options_.serve) {
    auto addr = parse_listen_address(*options_.serve);
    if (!addr) throw std::invalid_argument(fmt::format("bad listen address '{}'", *options_.serve));
    server.emplace(cell_, hub_, [this](const Command& c) { return command(c); }, options_.assets);
    const int port = server->start(addr->first, addr->second);
    if (port < 0) throw std::runtime_error(fmt::format("cannot listen on {}", *options_.serve));
    status << fmt::format("serving on http://{}:{}/", addr->first, port) << std::endl;
  }

  auto& kernel = testbed_.kernel();
  if (!server && !options_.realtime) {
    testbed_.run_until(duration_);
  } else {
    const auto wall0 = std::chrono::steady_clock::now();
    while (!shutdown_ && kernel.now() < duration_) {
      sim::VirtualTime target = kernel.now() + options_.step_ms;
      if (options_.realtime) {
        const auto wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall0).count();
        target = static_cast<sim::VirtualTime>(wall_ms * options_.speed);
      }
      target = std::min(target, duration_);
      if (target > kernel.now()) advance_to(target);
      if (options_.realtime) std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    if (!shutdown_) {
      testbed_.run_until(duration_);
      publish();
    }
    while (server && !shutdown_) {
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  }
  if (server) server->stop();
  write_outputs();

  RunSummary s;
  s.end = kernel.now();
  s.log_records = kernel.log().size();
  s.violations = testbed_.violations();
  s.interrupted = shutdown_ && kernel.now() < duration_;
  return s;
}

}  // namespace nin::gateway
