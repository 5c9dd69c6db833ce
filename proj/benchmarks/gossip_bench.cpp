#include <benchmark/benchmark.h>

#include "nin/kira/network.hpp"
#include "nin/sim/kernel.hpp"
#include "nin/sim/random_topology.hpp"

using namespace nin;

// Cold start to a settled overlay.
static void BM_GossipConvergence(benchmark::State& state) {
  sim::Rng rng(7);
  sim::RandomTopologyOptions opt;
  opt.nodes = static_cast<std::size_t>(state.range(0));
  const auto graph = sim::random_connected_topology(opt, rng);
  for (auto _ : state) {
    sim::Kernel kernel(graph, 7);
    kira::KiraNetwork net(kernel);
    net.start();
    while (!net.converged()) kernel.run_until(kernel.now() + 500);
    benchmark::DoNotOptimize(net.round());
  }
}
BENCHMARK(BM_GossipConvergence)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Route(benchmark::State& state) {
  sim::Rng rng(8);
  sim::RandomTopologyOptions opt;
  opt.nodes = 64;
  sim::Kernel kernel(sim::random_connected_topology(opt, rng), 8);
  kira::KiraNetwork net(kernel);
  net.start();
  while (!net.converged()) kernel.run_until(kernel.now() + 500);
  std::uint32_t i = 0;
  for (auto _ : state) {
    kira::ControlMessage m;
    m.src = net.id_of(sim::NodeRef{i % 64});
    m.dst = net.id_of(sim::NodeRef{(i * 7 + 3) % 64});
    benchmark::DoNotOptimize(net.route(m));
    ++i;
  }
}
BENCHMARK(BM_Route);
