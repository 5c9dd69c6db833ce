#include "nin/gateway/cli.hpp"

#include <atomic>
#include <csignal>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "nin/gateway/runner.hpp"
#include "nin/sim/scenario.hpp"

namespace nin::gateway {

namespace {

std::atomic<Runner*> g_runner{nullptr};

extern "C" void on_signal(int) {
  if (Runner* r = g_runner.load()) r->request_shutdown();
}

std::string describe(const sim::ScenarioError& e) {
  std::string where;
  if (!e.field().empty()) where += fmt::format(" field={}", e.field());
  if (e.line()) where += fmt::format(" line={}", *e.line());
  if (e.column()) where += fmt::format(" column={}", *e.column());
  return fmt::format("scenario error: {}{}", e.what(), where);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic spectrum-management testbed"};
  std::string scenario_path;
  RunOptions opts;
  std::uint64_t seed = 0;
  std::uint64_t duration = 0;
  std::string serve;
  std::string metrics_out;
  std::string log_out;
  std::string assets;
  bool headless = false;

  app.add_option("--scenario", scenario_path, "Scenario YAML file")->required();
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  auto* dur_opt = app.add_option("--duration-ms", duration, "Override the run length in virtual ms");
  auto* headless_flag = app.add_flag("--headless", headless, "Run without the HTTP gateway (default)");
  auto* serve_opt = app.add_option("--serve", serve, "Serve the gateway on ADDR (host:port)");
  headless_flag->excludes(serve_opt);
  app.add_flag("--realtime", opts.realtime, "Pace virtual time by the wall clock");
  app.add_option("--speed", opts.speed, "Virtual ms per wall ms with --realtime")->check(CLI::PositiveNumber);
  app.add_option("--metrics-out", metrics_out, "Write per-second KPI CSV here");
  app.add_option("--log-out", log_out, "Write the run log here");
  app.add_option("--assets", assets, "Serve dashboard files from this directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  if (*seed_opt) opts.seed = seed;
  if (*dur_opt) opts.duration_ms = static_cast<sim::VirtualTime>(duration);
  if (!serve.empty()) opts.serve = serve;
  if (!metrics_out.empty()) opts.metrics_out = metrics_out;
  if (!log_out.empty()) opts.log_out = log_out;
  if (!assets.empty()) opts.assets = assets;

  sim::Scenario scenario;
  try {
    scenario = sim::load_scenario_file(scenario_path);
  } catch (const sim::ScenarioError& e) {
    err << describe(e) << "\n";
    return kExitScenarioError;
  }

  try {
    Runner runner(std::move(scenario), opts);
    g_runner = &runner;
    auto prev_int = std::signal(SIGINT, on_signal);
    auto prev_term = std::signal(SIGTERM, on_signal);
    RunSummary s = runner.run(out);
    std::signal(SIGINT, prev_int);
    std::signal(SIGTERM, prev_term);
    g_runner = nullptr;

    const auto& plan = runner.testbed().sm().manager().plan();
    std::string bands;
    for (const auto& [id, band] : plan.assignments) bands += fmt::format(" SN-{}={}MHz", id.value, band.width());
    out << fmt::format("virtual_ms={} records={} plan_v={}{} violations={}", s.end, s.log_records, plan.version,
                       bands, s.violations.size())
        << "\n";
    for (const auto& v : s.violations) err << "invariant violation: " << v << "\n";
    return s.violations.empty() ? kExitOk : kExitInvariantViolation;
  } catch (const sim::ScenarioError& e) {
    g_runner = nullptr;
    err << describe(e) << "\n";
    return kExitScenarioError;
  } catch (const std::exception& e) {
    g_runner = nullptr;
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace nin::gateway
