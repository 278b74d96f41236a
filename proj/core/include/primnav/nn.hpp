#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "primnav/tensor.hpp"

namespace primnav {

/// Valid-padding 2D convolution. Input is H x W x C row-major (channel
/// innermost), kernels K x K x C x F (filter innermost), output H' x W' x F
/// with out_dim = (in_dim - kernel) / stride + 1.
struct ConvSpec {
    std::size_t in_h = 0, in_w = 0, in_c = 0;
    std::size_t kernel = 0, stride = 1, filters = 0;

    std::size_t out_h() const { return (in_h - kernel) / stride + 1; }
    std::size_t out_w() const { return (in_w - kernel) / stride + 1; }
    std::size_t in_size() const { return in_h * in_w * in_c; }
    std::size_t out_size() const { return out_h() * out_w() * filters; }
    std::size_t weight_size() const { return kernel * kernel * in_c * filters; }

    /// Rejects inconsistent shapes at network build time.
    void validate() const;
};

void conv2d_forward(const ConvSpec& spec, std::span<const double> input,
                    std::span<const double> weights, std::span<const double> bias,
                    std::span<double> output);

/// Accumulates gradients into d_weights / d_bias / d_input (caller zeroes
/// them when starting a fresh accumulation). Pass an empty d_input to skip
/// the input gradient (first layer).
void conv2d_backward(const ConvSpec& spec, std::span<const double> input,
                     std::span<const double> weights, std::span<const double> d_output,
                     std::span<double> d_weights, std::span<double> d_bias,
                     std::span<double> d_input);

/// out[j] = sum_i in[i] * w[i*M + j] + b[j]; weights are N x M row-major.
void dense_forward(std::span<const double> input, std::span<const double> weights,
                   std::span<const double> bias, std::span<double> output);

void dense_backward(std::span<const double> input, std::span<const double> weights,
                    std::span<const double> d_output, std::span<double> d_weights,
                    std::span<double> d_bias, std::span<double> d_input);

void relu_inplace(std::span<double> values);

/// Given post-activation values, maps the upstream gradient through ReLU.
void relu_backward_inplace(std::span<const double> activated, std::span<double> d_values);

struct HuberResult {
    double loss;
    double grad;  // d loss / d prediction
};

/// Huber loss with threshold 1: quadratic for |e| <= 1, linear beyond.
HuberResult huber_loss(double prediction, double target);

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    std::uint64_t step_count = 0;
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_hat = 1e-8;

    static AdamState make(std::size_t parameter_count, double learning_rate = 0.001);
};

/// Bias-corrected Adam update, elementwise over the flattened parameter set.
/// Throws on non-finite gradients so training can abort with a diagnostic.
void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, AdamState& state);

struct GradCheckReport {
    double max_rel_error = 0.0;
    std::size_t worst_parameter = 0;
    double tolerance = 0.0;
    bool passed = false;
};

/// Central-difference check of an analytic gradient. `scalar_fn` evaluates
/// the scalar output at the given parameter vector; parameters are perturbed
/// one at a time with step h.
GradCheckReport gradient_check(std::vector<double> params,
                               const std::function<double(const std::vector<double>&)>& scalar_fn,
                               std::span<const double> analytic_grad, double tolerance,
                               double h = 1e-5);

}  // namespace primnav
