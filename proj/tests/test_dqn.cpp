#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "primnav/dqn.hpp"

using namespace primnav;

namespace {

DepthImage random_depth(std::uint64_t seed) {
    DepthImage img;
    Rng rng(seed);
    for (double& v : img.values) v = rng.uniform();
    return img;
}

}  // namespace

TEST_CASE("parameter count is exactly 69786") {
    const QNetwork net = QNetwork::build(1);
    // Layer-wise: 808+4624+4640+51264+32+16+16+528+5184+2080+594
    CHECK(net.parameter_count() == 69786);

    std::size_t by_layers = 0;
    for (const Tensor& t : net.params()) by_layers += t.size();
    CHECK(by_layers == 69786);
}

TEST_CASE("architecture fingerprint carries the documented layer shapes") {
    const auto arch = QNetwork::architecture();
    CHECK(arch[0] == std::vector<std::size_t>{10, 10, 1, 8});   // 8 filters 10x10
    CHECK(arch[2] == std::vector<std::size_t>{6, 6, 8, 16});
    CHECK(arch[4] == std::vector<std::size_t>{3, 3, 16, 32});
    CHECK(arch[6] == std::vector<std::size_t>{800, 64});        // flatten 800
    CHECK(arch[8] == std::vector<std::size_t>{1, 16});          // x sub-lane is the wide one
    CHECK(arch[16] == std::vector<std::size_t>{80, 64});
    CHECK(arch[18] == std::vector<std::size_t>{64, 32});
    CHECK(arch[20] == std::vector<std::size_t>{32, 18});
}

TEST_CASE("build is deterministic per seed and differs across seeds") {
    const QNetwork a = QNetwork::build(1);
    const QNetwork b = QNetwork::build(1);
    const QNetwork c = QNetwork::build(2);
    CHECK(flatten(a.params()) == flatten(b.params()));
    CHECK(flatten(a.params()) != flatten(c.params()));
}

TEST_CASE("forward on zero input yields finite outputs") {
    const QNetwork net = QNetwork::build(3);
    DepthImage depth;  // all zeros
    const QValues q = net.forward(depth, {0.0, 0.0, 0.0});
    for (double v : q) CHECK(std::isfinite(v));
}

TEST_CASE("forward is deterministic") {
    const QNetwork net = QNetwork::build(3);
    const DepthImage depth = random_depth(9);
    const Vec3 relpos{2.0, -0.5, 1.0};
    const QValues q1 = net.forward(depth, relpos);
    const QValues q2 = net.forward(depth, relpos);
    CHECK(q1 == q2);
}

TEST_CASE("forward validates its inputs") {
    const QNetwork net = QNetwork::build(3);
    DepthImage bad = random_depth(9);
    bad.values[5] = 1.5;
    CHECK_THROWS_AS(net.forward(bad, {0, 0, 0}), std::invalid_argument);
    const DepthImage ok = random_depth(9);
    CHECK_THROWS_AS(net.forward(ok, {std::nan(""), 0, 0}), std::invalid_argument);
}

TEST_CASE("select_action: greedy, uniform, tie-break") {
    Rng rng(5);
    QValues q{};
    q[7] = 3.0;
    CHECK(select_action(q, 0.0, rng) == 7);

    QValues flat{};
    CHECK(select_action(flat, 0.0, rng) == 0);  // lowest-index tie-break

    std::array<int, kNumActions> counts{};
    for (int i = 0; i < 10000; ++i) counts[select_action(q, 1.0, rng)] += 1;
    for (int c : counts) CHECK(std::abs(c / 10000.0 - 1.0 / 18.0) < 0.02);
}

TEST_CASE("greedy selection is invariant under positive affine transforms") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        QValues q;
        for (double& v : q) v = rng.uniform(-5, 5);
        const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-10, 10);
        QValues scaled;
        for (std::size_t i = 0; i < kNumActions; ++i) scaled[i] = a * q[i] + b;
        CHECK(argmax_action(scaled) == argmax_action(q));
    }
}

TEST_CASE("td_target examples") {
    QValues next{};
    CHECK(td_target(-1.0, next, 0.99, true) == -1.0);
    CHECK(td_target(0.3, next, 0.0, false) == 0.3);
    next[4] = 2.0;
    CHECK(td_target(0.5, next, 0.99, false) == doctest::Approx(2.48));
}

TEST_CASE("td_target is monotone in reward and bootstrap value") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        QValues next{};
        for (double& v : next) v = rng.uniform(-2, 2);
        const double r = rng.uniform(-1, 1), gamma = rng.uniform(0, 1);
        const double base = td_target(r, next, gamma, false);
        CHECK(td_target(r + 0.25, next, gamma, false) >= base);
        QValues bumped = next;
        bumped[argmax_action(next)] += 0.5;
        CHECK(td_target(r, bumped, gamma, false) >= base);
    }
}

TEST_CASE("analytic network gradient agrees with finite differences on a parameter sample") {
    const QNetwork net = QNetwork::build(21);
    const DepthImage depth = random_depth(22);
    const Vec3 relpos{1.5, -0.7, 0.3};

    Rng rng(23);
    QValues coeffs;
    for (double& c : coeffs) c = rng.uniform(-1, 1);

    QNetwork::Cache cache;
    net.forward(depth, relpos, cache);
    std::vector<Tensor> grads = net.zero_grads();
    net.backward(cache, coeffs, grads);
    const std::vector<double> analytic = flatten(grads);

    std::vector<double> flat = flatten(net.params());
    QNetwork probe = net;
    auto scalar_at = [&](const std::vector<double>& p) {
        unflatten(p, probe.params());
        const QValues q = probe.forward(depth, relpos);
        double s = 0.0;
        for (std::size_t i = 0; i < kNumActions; ++i) s += coeffs[i] * q[i];
        return s;
    };

    const double h = 1e-5;
    double max_rel = 0.0;
    for (int k = 0; k < 400; ++k) {
        const std::size_t i = rng.uniform_index(flat.size());
        const double saved = flat[i];
        flat[i] = saved + h;
        const double fp = scalar_at(flat);
        flat[i] = saved - h;
        const double fm = scalar_at(flat);
        flat[i] = saved;
        const double numeric = (fp - fm) / (2 * h);
        const double rel = std::abs(numeric - analytic[i]) /
                           std::max({1.0, std::abs(numeric), std::abs(analytic[i])});
        max_rel = std::max(max_rel, rel);
    }
    CHECK(max_rel < 1e-4);
}
