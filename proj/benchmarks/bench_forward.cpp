#include <benchmark/benchmark.h>

#include <vector>

#include "mscale/network.hpp"
#include "mscale/objective.hpp"
#include "mscale/rng.hpp"

namespace {

mscale::Network make_net(int dim, int width, int depth) {
  std::vector<int> widths{dim};
  for (int i = 0; i < depth; ++i) widths.push_back(width);
  widths.push_back(1);
  mscale::NetworkSpec spec{widths, mscale::Activation::Srelu, 100, {},
                           mscale::InitScheme::D1};
  return mscale::make_network(spec, 7);
}

std::vector<double> random_points(int m, int dim) {
  mscale::Pcg32 rng(99, 1);
  std::vector<double> pts(static_cast<std::size_t>(m) * dim);
  for (double& v : pts) v = rng.next_double();
  return pts;
}

void bench_value(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  mscale::Network net = make_net(3, 500, 3);
  std::vector<double> pts = random_points(m, 3);
  std::vector<double> vals(m);
  mscale::Workspace ws;
  for (auto _ : state) {
    forward_batch(net, pts.data(), m, mscale::EvalMode::Value, ws, vals.data(),
                  nullptr, nullptr);
    benchmark::DoNotOptimize(vals.data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}

void bench_grad_lap(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  mscale::Network net = make_net(3, 500, 3);
  std::vector<double> pts = random_points(m, 3);
  std::vector<double> vals(m), grads(static_cast<std::size_t>(m) * 3), laps(m);
  mscale::Workspace ws;
  for (auto _ : state) {
    forward_batch(net, pts.data(), m, mscale::EvalMode::GradLap, ws, vals.data(),
                  grads.data(), laps.data());
    benchmark::DoNotOptimize(laps.data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}

void bench_objective_gradient(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  mscale::Network net = make_net(3, 500, 3);
  std::vector<double> pts = random_points(m, 3);
  std::vector<double> labels(m, 0.5);
  mscale::TrainBatch batch;
  batch.dim = 3;
  batch.inputs = pts;
  batch.labels = labels;
  mscale::Objective obj{mscale::LossKind::Mse, nullptr, 0.0};
  std::vector<double> grad;
  mscale::Workspace ws;
  for (auto _ : state) {
    double loss = objective_param_gradient(net, obj, batch, grad, ws);
    benchmark::DoNotOptimize(loss);
    benchmark::DoNotOptimize(grad.data());
  }
  state.SetItemsProcessed(state.iterations() * m);
}

}  // namespace

BENCHMARK(bench_value)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bench_grad_lap)->Arg(256)->Arg(1024);
BENCHMARK(bench_objective_gradient)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
