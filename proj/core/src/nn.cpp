#include "primnav/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace primnav {

void ConvSpec::validate() const {
    if (kernel == 0 || kernel > in_h || kernel > in_w)
        throw std::invalid_argument("conv: kernel must satisfy 0 < K <= H and K <= W");
    if (stride < 1) throw std::invalid_argument("conv: stride must be >= 1");
    if (in_c == 0 || filters == 0) throw std::invalid_argument("conv: zero channel count");
}

void conv2d_forward(const ConvSpec& spec, std::span<const double> input,
                    std::span<const double> weights, std::span<const double> bias,
                    std::span<double> output) {
    const std::size_t oh = spec.out_h(), ow = spec.out_w();
    const std::size_t K = spec.kernel, C = spec.in_c, F = spec.filters, S = spec.stride;
    if (input.size() != spec.in_size() || weights.size() != spec.weight_size() ||
        bias.size() != F || output.size() != spec.out_size())
        throw std::invalid_argument("conv2d_forward: shape mismatch");

    for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
            double* out = &output[(oy * ow + ox) * F];
            for (std::size_t f = 0; f < F; ++f) out[f] = bias[f];
            for (std::size_t ky = 0; ky < K; ++ky) {
                const double* in_row = &input[((oy * S + ky) * spec.in_w + ox * S) * C];
                const double* w_row = &weights[ky * K * C * F];
                for (std::size_t kx = 0; kx < K; ++kx) {
                    for (std::size_t c = 0; c < C; ++c) {
                        const double v = in_row[kx * C + c];
                        const double* w = &w_row[(kx * C + c) * F];
                        for (std::size_t f = 0; f < F; ++f) out[f] += v * w[f];
                    }
                }
            }
        }
    }
}

void conv2d_backward(const ConvSpec& spec, std::span<const double> input,
                     std::span<const double> weights, std::span<const double> d_output,
                     std::span<double> d_weights, std::span<double> d_bias,
                     std::span<double> d_input) {
    const std::size_t oh = spec.out_h(), ow = spec.out_w();
    const std::size_t K = spec.kernel, C = spec.in_c, F = spec.filters, S = spec.stride;
    if (input.size() != spec.in_size() || weights.size() != spec.weight_size() ||
        d_output.size() != spec.out_size() || d_weights.size() != spec.weight_size() ||
        d_bias.size() != F || (!d_input.empty() && d_input.size() != spec.in_size()))
        throw std::invalid_argument("conv2d_backward: shape mismatch");

    for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
            const double* dout = &d_output[(oy * ow + ox) * F];
            for (std::size_t f = 0; f < F; ++f) d_bias[f] += dout[f];
            for (std::size_t ky = 0; ky < K; ++ky) {
                const std::size_t in_off = ((oy * S + ky) * spec.in_w + ox * S) * C;
                for (std::size_t kx = 0; kx < K; ++kx) {
                    for (std::size_t c = 0; c < C; ++c) {
                        const std::size_t ii = in_off + kx * C + c;
                        const std::size_t wi = ((ky * K + kx) * C + c) * F;
                        const double v = input[ii];
                        double* dw = &d_weights[wi];
                        for (std::size_t f = 0; f < F; ++f) dw[f] += v * dout[f];
                        if (!d_input.empty()) {
                            const double* w = &weights[wi];
                            double acc = 0.0;
                            for (std::size_t f = 0; f < F; ++f) acc += w[f] * dout[f];
                            d_input[ii] += acc;
                        }
                    }
                }
            }
        }
    }
}

void dense_forward(std::span<const double> input, std::span<const double> weights,
                   std::span<const double> bias, std::span<double> output) {
    const std::size_t n = input.size(), m = output.size();
    if (weights.size() != n * m || bias.size() != m)
        throw std::invalid_argument("dense_forward: shape mismatch");
    std::copy(bias.begin(), bias.end(), output.begin());
    for (std::size_t i = 0; i < n; ++i) {
        const double v = input[i];
        const double* w = &weights[i * m];
        for (std::size_t j = 0; j < m; ++j) output[j] += v * w[j];
    }
}

void dense_backward(std::span<const double> input, std::span<const double> weights,
                    std::span<const double> d_output, std::span<double> d_weights,
                    std::span<double> d_bias, std::span<double> d_input) {
    const std::size_t n = input.size(), m = d_output.size();
    if (weights.size() != n * m || d_weights.size() != n * m || d_bias.size() != m ||
        (!d_input.empty() && d_input.size() != n))
        throw std::invalid_argument("dense_backward: shape mismatch");
    for (std::size_t j = 0; j < m; ++j) d_bias[j] += d_output[j];
    for (std::size_t i = 0; i < n; ++i) {
        const double v = input[i];
        const double* w = &weights[i * m];
        double* dw = &d_weights[i * m];
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            dw[j] += v * d_output[j];
            acc += w[j] * d_output[j];
        }
        if (!d_input.empty()) d_input[i] += acc;
    }
}

void relu_inplace(std::span<double> values) {
    for (double& v : values) v = v > 0.0 ? v : 0.0;
}

void relu_backward_inplace(std::span<const double> activated, std::span<double> d_values) {
    for (std::size_t i = 0; i < d_values.size(); ++i)
        if (activated[i] <= 0.0) d_values[i] = 0.0;
}

HuberResult huber_loss(double prediction, double target) {
    if (!std::isfinite(prediction) || !std::isfinite(target))
        throw std::invalid_argument("huber_loss: non-finite input");
    const double e = prediction - target;
    if (std::abs(e) <= 1.0) return {0.5 * e * e, e};
    return {std::abs(e) - 0.5, std::clamp(e, -1.0, 1.0)};
}

AdamState AdamState::make(std::size_t parameter_count, double learning_rate) {
    AdamState s;
    s.first_moment.assign(parameter_count, 0.0);
    s.second_moment.assign(parameter_count, 0.0);
    s.learning_rate = learning_rate;
    return s;
}

void adam_step(std::vector<Tensor>& params, const std::vector<Tensor>& grads, AdamState& state) {
    if (params.size() != grads.size())
        throw std::invalid_argument("adam_step: parameter/gradient tensor count mismatch");
    if (state.first_moment.size() != total_size(params))
        throw std::invalid_argument("adam_step: optimizer state size mismatch");

    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));

    std::size_t off = 0;
    for (std::size_t t = 0; t < params.size(); ++t) {
        if (params[t].size() != grads[t].size())
            throw std::invalid_argument("adam_step: tensor shape mismatch at index " +
                                        std::to_string(t));
        for (std::size_t i = 0; i < params[t].size(); ++i, ++off) {
            const double g = grads[t][i];
            if (!std::isfinite(g))
                throw std::runtime_error("adam_step: non-finite gradient in tensor " +
                                         std::to_string(t) + " element " + std::to_string(i));
            double& m = state.first_moment[off];
            double& v = state.second_moment[off];
            m = state.beta1 * m + (1.0 - state.beta1) * g;
            v = state.beta2 * v + (1.0 - state.beta2) * g * g;
            const double m_hat = m / bc1;
            const double v_hat = v / bc2;
            params[t][i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon_hat);
        }
    }
}

GradCheckReport gradient_check(std::vector<double> params,
                               const std::function<double(const std::vector<double>&)>& scalar_fn,
                               std::span<const double> analytic_grad, double tolerance, double h) {
    if (analytic_grad.size() != params.size())
        throw std::invalid_argument("gradient_check: gradient size mismatch");
    GradCheckReport report;
    report.tolerance = tolerance;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double f_plus = scalar_fn(params);
        params[i] = saved - h;
        const double f_minus = scalar_fn(params);
        params[i] = saved;
        const double numeric = (f_plus - f_minus) / (2.0 * h);
        const double analytic = analytic_grad[i];
        const double denom = std::max({1.0, std::abs(analytic), std::abs(numeric)});
        const double rel = std::abs(analytic - numeric) / denom;
        if (rel > report.max_rel_error) {
            report.max_rel_error = rel;
            report.worst_parameter = i;
        }
    }
    report.passed = report.max_rel_error < tolerance;
    return report;
}

}  // namespace primnav
