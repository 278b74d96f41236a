#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "primnav/nn.hpp"
#include "primnav/rng.hpp"
#include "primnav/tensor.hpp"

using namespace primnav;

namespace {

// Flat parameterization [weights, bias, input] of one conv layer, for
// finite-difference checks against the analytic backward pass.
double conv_scalar(const ConvSpec& spec, const std::vector<double>& flat,
                   const std::vector<double>& coeffs) {
    const std::size_t nw = spec.weight_size(), nb = spec.filters;
    std::vector<double> w(flat.begin(), flat.begin() + nw);
    std::vector<double> b(flat.begin() + nw, flat.begin() + nw + nb);
    std::vector<double> in(flat.begin() + nw + nb, flat.end());
    std::vector<double> out(spec.out_size());
    conv2d_forward(spec, in, w, b, out);
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += coeffs[i] * out[i];
    return s;
}

double dense_scalar(std::size_t n, std::size_t m, const std::vector<double>& flat,
                    const std::vector<double>& coeffs) {
    std::vector<double> w(flat.begin(), flat.begin() + n * m);
    std::vector<double> b(flat.begin() + n * m, flat.begin() + n * m + m);
    std::vector<double> in(flat.begin() + n * m + m, flat.end());
    std::vector<double> out(m);
    dense_forward(in, w, b, out);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += coeffs[j] * out[j];
    return s;
}

}  // namespace

TEST_CASE("tensor shape bookkeeping") {
    Tensor t{3, 4, 2};
    CHECK(t.size() == 24);
    CHECK(t.all_finite());

    std::vector<Tensor> set{Tensor{2, 2}, Tensor{3}};
    set[0].data = {1, 2, 3, 4};
    set[1].data = {5, 6, 7};
    auto flat = flatten(set);
    CHECK(flat == std::vector<double>{1, 2, 3, 4, 5, 6, 7});
    flat[0] = 9;
    unflatten(flat, set);
    CHECK(set[0].data[0] == 9);
}

TEST_CASE("valid-padding output shapes used by the network") {
    CHECK(ConvSpec{32, 32, 1, 10, 2, 8}.out_h() == 12);
    CHECK(ConvSpec{12, 12, 8, 6, 1, 16}.out_h() == 7);
    CHECK(ConvSpec{7, 7, 16, 3, 1, 32}.out_h() == 5);
}

TEST_CASE("conv2d rejects bad shapes at build time") {
    CHECK_THROWS_AS(ConvSpec({4, 4, 1, 5, 1, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ConvSpec({4, 4, 1, 2, 0, 1}).validate(), std::invalid_argument);
}

TEST_CASE("conv2d identity kernel") {
    const ConvSpec spec{5, 5, 1, 1, 1, 1};
    std::vector<double> in(25), w{1.0}, b{0.0}, out(25);
    Rng rng(3);
    for (double& v : in) v = rng.uniform(-1, 1);
    conv2d_forward(spec, in, w, b, out);
    CHECK(out == in);
}

TEST_CASE("conv2d hand-evaluated 3x3 example") {
    const ConvSpec spec{3, 3, 1, 2, 1, 1};
    const std::vector<double> in{1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> w{1, 0, 0, 1};  // 2x2 kernel [[1,0],[0,1]]
    const std::vector<double> b{0.0};
    std::vector<double> out(4);
    conv2d_forward(spec, in, w, b, out);
    CHECK(out == std::vector<double>{6, 8, 12, 14});
}

TEST_CASE("conv2d 32x32 with 8 10x10 filters stride 2 gives 12x12x8") {
    const ConvSpec spec{32, 32, 1, 10, 2, 8};
    CHECK(spec.out_size() == 12 * 12 * 8);
    std::vector<double> in(spec.in_size(), 0.5), w(spec.weight_size(), 0.1), b(8, 0.0);
    std::vector<double> out(spec.out_size());
    conv2d_forward(spec, in, w, b, out);
    for (double v : out) CHECK(v == doctest::Approx(0.5 * 0.1 * 100).epsilon(1e-12));
}

TEST_CASE("dense examples") {
    std::vector<double> out(2);
    const std::vector<double> identity{1.0, 0.0, 0.0, 1.0}, zero_bias{0.0, 0.0};
    const std::vector<double> in12{1.0, 2.0};
    dense_forward(in12, identity, zero_bias, out);
    CHECK(out == std::vector<double>{1, 2});

    const std::vector<double> zeros{0.0, 0.0}, some_w{5.0, 6.0, 7.0, 8.0}, bias{0.25, -0.5};
    dense_forward(zeros, some_w, bias, out);
    CHECK(out == std::vector<double>{0.25, -0.5});

    const std::vector<double> ones{1.0, 1.0}, w2{2.0, 3.0, 4.0, 5.0}, ones_b{1.0, 1.0};
    dense_forward(ones, w2, ones_b, out);
    CHECK(out == std::vector<double>{7, 9});
}

TEST_CASE("huber loss branches") {
    auto r = huber_loss(1.0, 1.0);
    CHECK(r.loss == 0.0);
    CHECK(r.grad == 0.0);

    r = huber_loss(0.5, 0.0);
    CHECK(r.loss == doctest::Approx(0.125));
    CHECK(r.grad == doctest::Approx(0.5));

    r = huber_loss(2.0, 0.0);
    CHECK(r.loss == doctest::Approx(1.5));
    CHECK(r.grad == doctest::Approx(1.0));

    CHECK_THROWS_AS(huber_loss(std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("huber loss and gradient continuous at |e| = 1") {
    for (double e : {1.0, -1.0}) {
        const auto below = huber_loss(e * (1.0 - 1e-9), 0.0);
        const auto above = huber_loss(e * (1.0 + 1e-9), 0.0);
        CHECK(std::abs(below.loss - above.loss) < 1e-6);
        CHECK(std::abs(below.grad - above.grad) < 1e-6);
    }
}

TEST_CASE("adam with zero gradients is the identity for all step counts") {
    std::vector<Tensor> params{Tensor{3}};
    params[0].data = {1.5, -2.0, 0.25};
    std::vector<Tensor> grads{Tensor{3}};
    AdamState state = AdamState::make(3);
    for (int i = 0; i < 10; ++i) adam_step(params, grads, state);
    CHECK(params[0].data == std::vector<double>{1.5, -2.0, 0.25});
    CHECK(state.step_count == 10);
}

TEST_CASE("adam first step moves by about lr in the gradient direction") {
    std::vector<Tensor> params{Tensor{1}};
    params[0].data = {1.0};
    std::vector<Tensor> grads{Tensor{1}};
    grads[0].data = {0.1};
    AdamState state = AdamState::make(1);
    adam_step(params, grads, state);
    CHECK(params[0].data[0] == doctest::Approx(1.0 - 0.001).epsilon(1e-5));
}

TEST_CASE("adam two-step trace matches the recurrence evaluated directly") {
    // Independent transcription of the update for constant gradient 1.
    const double lr = 0.001, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double m = 0.0, v = 0.0, expected = 0.0;
    for (int t = 1; t <= 2; ++t) {
        m = b1 * m + (1 - b1) * 1.0;
        v = b2 * v + (1 - b2) * 1.0;
        const double mh = m / (1 - std::pow(b1, t));
        const double vh = v / (1 - std::pow(b2, t));
        expected -= lr * mh / (std::sqrt(vh) + eps);
    }

    std::vector<Tensor> params{Tensor{1}};
    std::vector<Tensor> grads{Tensor{1}};
    grads[0].data = {1.0};
    AdamState state = AdamState::make(1);
    adam_step(params, grads, state);
    adam_step(params, grads, state);
    CHECK(params[0].data[0] == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("adam rejects non-finite gradients") {
    std::vector<Tensor> params{Tensor{1}};
    std::vector<Tensor> grads{Tensor{1}};
    grads[0].data = {std::numeric_limits<double>::infinity()};
    AdamState state = AdamState::make(1);
    CHECK_THROWS_AS(adam_step(params, grads, state), std::runtime_error);
}

TEST_CASE("dense backward matches central finite differences") {
    const std::size_t n = 6, m = 4;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed);
        std::vector<double> flat(n * m + m + n);
        for (double& v : flat) v = rng.uniform(-1, 1);
        std::vector<double> coeffs(m);
        for (double& c : coeffs) c = rng.uniform(-1, 1);

        // Analytic gradient of the coeff-weighted output sum.
        std::vector<double> in(flat.begin() + n * m + m, flat.end());
        std::vector<double> w(flat.begin(), flat.begin() + n * m);
        std::vector<double> dw(n * m, 0.0), db(m, 0.0), din(n, 0.0);
        dense_backward(in, w, coeffs, dw, db, din);
        std::vector<double> analytic;
        analytic.insert(analytic.end(), dw.begin(), dw.end());
        analytic.insert(analytic.end(), db.begin(), db.end());
        analytic.insert(analytic.end(), din.begin(), din.end());

        const auto report = gradient_check(
            flat, [&](const std::vector<double>& p) { return dense_scalar(n, m, p, coeffs); },
            analytic, 1e-4);
        CHECK_MESSAGE(report.passed, "seed ", seed, " max rel err ", report.max_rel_error);
        CHECK(report.max_rel_error < 1e-4);
    }
}

TEST_CASE("conv backward matches central finite differences (6x6 input, 3x3 kernel)") {
    const ConvSpec spec{6, 6, 2, 3, 1, 3};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed * 11);
        std::vector<double> flat(spec.weight_size() + spec.filters + spec.in_size());
        for (double& v : flat) v = rng.uniform(-1, 1);
        std::vector<double> coeffs(spec.out_size());
        for (double& c : coeffs) c = rng.uniform(-1, 1);

        std::vector<double> w(flat.begin(), flat.begin() + spec.weight_size());
        std::vector<double> in(flat.begin() + spec.weight_size() + spec.filters, flat.end());
        std::vector<double> dw(spec.weight_size(), 0.0), db(spec.filters, 0.0),
            din(spec.in_size(), 0.0);
        conv2d_backward(spec, in, w, coeffs, dw, db, din);
        std::vector<double> analytic;
        analytic.insert(analytic.end(), dw.begin(), dw.end());
        analytic.insert(analytic.end(), db.begin(), db.end());
        analytic.insert(analytic.end(), din.begin(), din.end());

        const auto report = gradient_check(
            flat, [&](const std::vector<double>& p) { return conv_scalar(spec, p, coeffs); },
            analytic, 1e-4);
        CHECK_MESSAGE(report.passed, "seed ", seed, " max rel err ", report.max_rel_error);
    }
}

TEST_CASE("forward passes are deterministic") {
    const ConvSpec spec{8, 8, 1, 3, 2, 4};
    std::vector<double> in(spec.in_size()), w(spec.weight_size()), b(spec.filters);
    Rng rng(17);
    for (double& v : in) v = rng.uniform(-1, 1);
    for (double& v : w) v = rng.uniform(-1, 1);
    for (double& v : b) v = rng.uniform(-1, 1);
    std::vector<double> out1(spec.out_size()), out2(spec.out_size());
    conv2d_forward(spec, in, w, b, out1);
    conv2d_forward(spec, in, w, b, out2);
    CHECK(out1 == out2);
}
