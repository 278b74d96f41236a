#include <benchmark/benchmark.h>

#include "primnav/bezier.hpp"
#include "primnav/depthcam.hpp"
#include "primnav/dqn.hpp"
#include "primnav/env.hpp"

namespace {

using namespace primnav;

void BM_QNetworkForward(benchmark::State& state) {
    const QNetwork net = QNetwork::build(1);
    DepthImage depth;
    Rng rng(7);
    for (double& v : depth.values) v = rng.uniform();
    const Vec3 relpos{3.0, -1.0, 0.5};
    for (auto _ : state) {
        QValues q = net.forward(depth, relpos);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_QNetworkForward);

void BM_QNetworkBackward(benchmark::State& state) {
    const QNetwork net = QNetwork::build(1);
    DepthImage depth;
    Rng rng(7);
    for (double& v : depth.values) v = rng.uniform();
    QNetwork::Cache cache;
    net.forward(depth, {3.0, -1.0, 0.5}, cache);
    std::vector<Tensor> grads = net.zero_grads();
    QValues d_q{};
    d_q[4] = 1.0;
    for (auto _ : state) {
        for (Tensor& g : grads) g.fill(0.0);
        net.backward(cache, d_q, grads);
        benchmark::DoNotOptimize(grads);
    }
}
BENCHMARK(BM_QNetworkBackward);

void BM_DepthRender(benchmark::State& state) {
    const WorldSpec world = builtin_env("test_mixed_1");
    for (auto _ : state) {
        DepthImage img = render(world, {5.0, 0.0, 0.0}, 0.0);
        benchmark::DoNotOptimize(img);
    }
}
BENCHMARK(BM_DepthRender);

void BM_BezierSample(benchmark::State& state) {
    const auto prims = action_set(1.0);
    const ControlPoints cp = primitive_to_curve({1.0, 2.0, 3.0}, 0.3, prims[10]);
    for (auto _ : state) {
        auto samples = sample_curve(cp, 11);
        benchmark::DoNotOptimize(samples);
    }
}
BENCHMARK(BM_BezierSample);

void BM_EnvStep(benchmark::State& state) {
    const WorldSpec world = builtin_env("obstacle_free");
    EnvConfig config;
    for (auto _ : state) {
        auto [sim, obs] = reset(world, config);
        StepResult sr = step(sim, 10, world, config);
        benchmark::DoNotOptimize(sr);
    }
}
BENCHMARK(BM_EnvStep);

}  // namespace

BENCHMARK_MAIN();
