#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "primnav/depthcam.hpp"
#include "primnav/geometry.hpp"
#include "primnav/nn.hpp"
#include "primnav/rng.hpp"
#include "primnav/tensor.hpp"

namespace primnav {

inline constexpr std::size_t kNumActions = 18;

/// Per-action Q estimates, index = motion primitive id.
using QValues = std::array<double, kNumActions>;

/// The two-lane Q-network.
///
/// Lane 1 (depth image): conv 8@10x10 s2 -> conv 16@6x6 s1 -> conv 32@3x3 s1
/// -> flatten 800 -> dense 64. Lane 2 (relative position): per-component
/// dense sub-lanes of widths 16/8/8 (x gets the wide one), fused by a dense
/// 32->16. Head: concat 80 -> dense 64 -> dense 32 -> dense 18. Every hidden
/// layer is ReLU; the output layer is linear. 69,786 scalar parameters.
class QNetwork {
  public:
    /// Deterministic build: weights uniform in +/- sqrt(6 / fan_in), biases
    /// zero.
    static QNetwork build(std::uint64_t seed);

    /// Layer shape list, used as the checkpoint architecture fingerprint.
    static std::vector<std::vector<std::size_t>> architecture();

    /// Intermediate activations kept for the backward pass.
    struct Cache {
        std::vector<double> input;  // 32*32 depth pixels
        std::array<double, 3> relpos;
        std::vector<double> conv1, conv2, conv3;        // post-ReLU
        std::vector<double> fc_img;                     // 64, post-ReLU
        std::vector<double> pos_cat;                    // 32, post-ReLU sub-lanes
        std::vector<double> pos_fuse;                   // 16, post-ReLU
        std::vector<double> cat;                        // 80
        std::vector<double> head1, head2;               // 64, 32, post-ReLU
    };

    QValues forward(const DepthImage& depth, const Vec3& relpos) const;
    QValues forward(const DepthImage& depth, const Vec3& relpos, Cache& cache) const;

    /// Accumulates d(sum_a d_q[a] * Q_a)/d(params) into `grads`, which must
    /// be shaped like the parameter set (see zero_grads).
    void backward(const Cache& cache, const QValues& d_q, std::vector<Tensor>& grads) const;

    std::vector<Tensor> zero_grads() const;
    std::size_t parameter_count() const { return total_size(params_); }

    std::vector<Tensor>& params() { return params_; }
    const std::vector<Tensor>& params() const { return params_; }

  private:
    std::vector<Tensor> params_;
};

/// epsilon-greedy selection: uniform with probability epsilon, otherwise
/// argmax with ties broken by lowest index.
std::size_t select_action(const QValues& q, double epsilon, Rng& rng);

std::size_t argmax_action(const QValues& q);

/// TD target per the Q-recursion: reward for terminal states, otherwise
/// reward + gamma * max_a' Q(s', a').
double td_target(double reward, const QValues& next_q, double gamma, bool terminal);

}  // namespace primnav
