#include <vector>

#include <benchmark/benchmark.h>

#include "btl/autodiff/evaluate.hpp"
#include "btl/experiments/config.hpp"
#include "btl/experiments/experiment.hpp"
#include "btl/network/mlp.hpp"

using namespace btl;

namespace {

// Jet propagation through an L x W tanh network at one point.
void BM_NetworkForward(benchmark::State& state) {
  const auto net = net::mlp_new({static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 1, 1});
  ad::Workspace ws(net.graph);
  for (auto _ : state) {
    ad::forward(net.graph, net.params.values(), {0.3, -0.2}, {}, ws);
    benchmark::DoNotOptimize(ws.jet(net.outputs[0]));
  }
}
BENCHMARK(BM_NetworkForward)->Args({3, 20})->Args({5, 40});

void BM_NetworkForwardBackward(benchmark::State& state) {
  const auto net = net::mlp_new({static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)), 1, 1});
  ad::Workspace ws(net.graph);
  std::vector<double> grad(net.params.size());
  for (auto _ : state) {
    ad::forward(net.graph, net.params.values(), {0.3, -0.2}, {}, ws);
    ad::backward(net.graph, net.params.values(), net.outputs[0], 1.0, ws, grad);
    benchmark::DoNotOptimize(grad.data());
  }
}
BENCHMARK(BM_NetworkForwardBackward)->Args({3, 20})->Args({5, 40});

// Full loss and gradient of a study at desk size.
void BM_ExperimentLossGrad(benchmark::State& state) {
  const auto study = static_cast<xp::Study>(state.range(0));
  auto cfg = xp::default_config(study, {xp::schemes_for(study).front(), 0}, 'A');
  cfg.points = 500;
  cfg.hidden_layers = 3;
  cfg.width = 20;
  const xp::Experiment e(cfg);
  const auto params = e.initial_params();
  std::vector<double> grad(params.size());
  for (auto _ : state) {
    benchmark::DoNotOptimize(e.loss(params, grad).total);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.points));
}
BENCHMARK(BM_ExperimentLossGrad)
    ->Arg(static_cast<int>(xp::Study::SgAbt))
    ->Arg(static_cast<int>(xp::Study::ComplexMiura))
    ->Arg(static_cast<int>(xp::Study::RealMiura))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
