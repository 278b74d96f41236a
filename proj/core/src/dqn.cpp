#include "primnav/dqn.hpp"

#include <cmath>
#include <stdexcept>

namespace primnav {

namespace {

const ConvSpec kConv1{32, 32, 1, 10, 2, 8};   // -> 12x12x8
const ConvSpec kConv2{12, 12, 8, 6, 1, 16};   // -> 7x7x16
const ConvSpec kConv3{7, 7, 16, 3, 1, 32};    // -> 5x5x32, flattens to 800

// Parameter tensor order. Shapes double as the architecture fingerprint.
enum ParamIndex : std::size_t {
    kConv1W, kConv1B, kConv2W, kConv2B, kConv3W, kConv3B,
    kFcImgW, kFcImgB,
    kPosXW, kPosXB, kPosYW, kPosYB, kPosZW, kPosZB, kPosFuseW, kPosFuseB,
    kHead1W, kHead1B, kHead2W, kHead2B, kHead3W, kHead3B,
    kParamTensorCount
};

std::vector<Tensor> make_param_tensors() {
    std::vector<Tensor> p(kParamTensorCount);
    p[kConv1W] = Tensor{10, 10, 1, 8};
    p[kConv1B] = Tensor{8};
    p[kConv2W] = Tensor{6, 6, 8, 16};
    p[kConv2B] = Tensor{16};
    p[kConv3W] = Tensor{3, 3, 16, 32};
    p[kConv3B] = Tensor{32};
    p[kFcImgW] = Tensor{800, 64};
    p[kFcImgB] = Tensor{64};
    p[kPosXW] = Tensor{1, 16};
    p[kPosXB] = Tensor{16};
    p[kPosYW] = Tensor{1, 8};
    p[kPosYB] = Tensor{8};
    p[kPosZW] = Tensor{1, 8};
    p[kPosZB] = Tensor{8};
    p[kPosFuseW] = Tensor{32, 16};
    p[kPosFuseB] = Tensor{16};
    p[kHead1W] = Tensor{80, 64};
    p[kHead1B] = Tensor{64};
    p[kHead2W] = Tensor{64, 32};
    p[kHead2B] = Tensor{32};
    p[kHead3W] = Tensor{32, 18};
    p[kHead3B] = Tensor{18};
    return p;
}

std::size_t fan_in_of(std::size_t index, const std::vector<Tensor>& p) {
    const auto& shape = p[index].shape;
    if (shape.size() == 4) return shape[0] * shape[1] * shape[2];  // conv K*K*C
    return shape[0];                                               // dense N
}

}  // namespace

QNetwork QNetwork::build(std::uint64_t seed) {
    for (const ConvSpec& s : {kConv1, kConv2, kConv3}) s.validate();
    QNetwork net;
    net.params_ = make_param_tensors();
    Rng rng(derive_seed(seed, /*stream=*/0xD9));
    for (std::size_t i = 0; i < net.params_.size(); ++i) {
        if (i % 2 == 1) continue;  // biases stay zero
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in_of(i, net.params_)));
        for (double& w : net.params_[i].data) w = rng.uniform(-bound, bound);
    }
    return net;
}

std::vector<std::vector<std::size_t>> QNetwork::architecture() {
    std::vector<std::vector<std::size_t>> shapes;
    for (const Tensor& t : make_param_tensors()) shapes.push_back(t.shape);
    return shapes;
}

std::vector<Tensor> QNetwork::zero_grads() const {
    std::vector<Tensor> g(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i) g[i] = Tensor(params_[i].shape);
    return g;
}

QValues QNetwork::forward(const DepthImage& depth, const Vec3& relpos) const {
    Cache cache;
    return forward(depth, relpos, cache);
}

QValues QNetwork::forward(const DepthImage& depth, const Vec3& relpos, Cache& cache) const {
    for (double v : depth.values)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("QNetwork::forward: depth values must be in [0, 1]");
    if (!relpos.finite())
        throw std::invalid_argument("QNetwork::forward: relative position must be finite");

    const auto& p = params_;
    cache.input.assign(depth.values.begin(), depth.values.end());
    cache.relpos = {relpos.x, relpos.y, relpos.z};

    // Lane 1: depth image.
    cache.conv1.assign(kConv1.out_size(), 0.0);
    conv2d_forward(kConv1, cache.input, p[kConv1W].data, p[kConv1B].data, cache.conv1);
    relu_inplace(cache.conv1);
    cache.conv2.assign(kConv2.out_size(), 0.0);
    conv2d_forward(kConv2, cache.conv1, p[kConv2W].data, p[kConv2B].data, cache.conv2);
    relu_inplace(cache.conv2);
    cache.conv3.assign(kConv3.out_size(), 0.0);
    conv2d_forward(kConv3, cache.conv2, p[kConv3W].data, p[kConv3B].data, cache.conv3);
    relu_inplace(cache.conv3);
    cache.fc_img.assign(64, 0.0);
    dense_forward(cache.conv3, p[kFcImgW].data, p[kFcImgB].data, cache.fc_img);
    relu_inplace(cache.fc_img);

    // Lane 2: one scalar per sub-lane, x gets the wide one.
    cache.pos_cat.assign(32, 0.0);
    dense_forward(std::span(&cache.relpos[0], 1), p[kPosXW].data, p[kPosXB].data,
                  std::span(cache.pos_cat).subspan(0, 16));
    dense_forward(std::span(&cache.relpos[1], 1), p[kPosYW].data, p[kPosYB].data,
                  std::span(cache.pos_cat).subspan(16, 8));
    dense_forward(std::span(&cache.relpos[2], 1), p[kPosZW].data, p[kPosZB].data,
                  std::span(cache.pos_cat).subspan(24, 8));
    relu_inplace(cache.pos_cat);
    cache.pos_fuse.assign(16, 0.0);
    dense_forward(cache.pos_cat, p[kPosFuseW].data, p[kPosFuseB].data, cache.pos_fuse);
    relu_inplace(cache.pos_fuse);

    // Fusion head.
    cache.cat.assign(80, 0.0);
    std::copy(cache.fc_img.begin(), cache.fc_img.end(), cache.cat.begin());
    std::copy(cache.pos_fuse.begin(), cache.pos_fuse.end(), cache.cat.begin() + 64);
    cache.head1.assign(64, 0.0);
    dense_forward(cache.cat, p[kHead1W].data, p[kHead1B].data, cache.head1);
    relu_inplace(cache.head1);
    cache.head2.assign(32, 0.0);
    dense_forward(cache.head1, p[kHead2W].data, p[kHead2B].data, cache.head2);
    relu_inplace(cache.head2);

    QValues q{};
    dense_forward(cache.head2, p[kHead3W].data, p[kHead3B].data, q);
    return q;
}

void QNetwork::backward(const Cache& cache, const QValues& d_q, std::vector<Tensor>& grads) const {
    if (grads.size() != params_.size())
        throw std::invalid_argument("QNetwork::backward: gradient set shape mismatch");
    const auto& p = params_;

    std::vector<double> d_head2(32, 0.0);
    dense_backward(cache.head2, p[kHead3W].data, d_q, grads[kHead3W].data, grads[kHead3B].data,
                   d_head2);
    relu_backward_inplace(cache.head2, d_head2);

    std::vector<double> d_head1(64, 0.0);
    dense_backward(cache.head1, p[kHead2W].data, d_head2, grads[kHead2W].data,
                   grads[kHead2B].data, d_head1);
    relu_backward_inplace(cache.head1, d_head1);

    std::vector<double> d_cat(80, 0.0);
    dense_backward(cache.cat, p[kHead1W].data, d_head1, grads[kHead1W].data, grads[kHead1B].data,
                   d_cat);

    // Lane 2.
    std::vector<double> d_pos_fuse(d_cat.begin() + 64, d_cat.end());
    relu_backward_inplace(cache.pos_fuse, d_pos_fuse);
    std::vector<double> d_pos_cat(32, 0.0);
    dense_backward(cache.pos_cat, p[kPosFuseW].data, d_pos_fuse, grads[kPosFuseW].data,
                   grads[kPosFuseB].data, d_pos_cat);
    relu_backward_inplace(cache.pos_cat, d_pos_cat);
    dense_backward(std::span(&cache.relpos[0], 1), p[kPosXW].data,
                   std::span(d_pos_cat).subspan(0, 16), grads[kPosXW].data, grads[kPosXB].data,
                   {});
    dense_backward(std::span(&cache.relpos[1], 1), p[kPosYW].data,
                   std::span(d_pos_cat).subspan(16, 8), grads[kPosYW].data, grads[kPosYB].data,
                   {});
    dense_backward(std::span(&cache.relpos[2], 1), p[kPosZW].data,
                   std::span(d_pos_cat).subspan(24, 8), grads[kPosZW].data, grads[kPosZB].data,
                   {});

    // Lane 1.
    std::vector<double> d_fc_img(d_cat.begin(), d_cat.begin() + 64);
    relu_backward_inplace(cache.fc_img, d_fc_img);
    std::vector<double> d_conv3(kConv3.out_size(), 0.0);
    dense_backward(cache.conv3, p[kFcImgW].data, d_fc_img, grads[kFcImgW].data,
                   grads[kFcImgB].data, d_conv3);
    relu_backward_inplace(cache.conv3, d_conv3);
    std::vector<double> d_conv2(kConv2.out_size(), 0.0);
    conv2d_backward(kConv3, cache.conv2, p[kConv3W].data, d_conv3, grads[kConv3W].data,
                    grads[kConv3B].data, d_conv2);
    relu_backward_inplace(cache.conv2, d_conv2);
    std::vector<double> d_conv1(kConv1.out_size(), 0.0);
    conv2d_backward(kConv2, cache.conv1, p[kConv2W].data, d_conv2, grads[kConv2W].data,
                    grads[kConv2B].data, d_conv1);
    relu_backward_inplace(cache.conv1, d_conv1);
    conv2d_backward(kConv1, cache.input, p[kConv1W].data, d_conv1, grads[kConv1W].data,
                    grads[kConv1B].data, {});  // no gradient w.r.t. the image
}

std::size_t argmax_action(const QValues& q) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kNumActions; ++i)
        if (q[i] > q[best]) best = i;
    return best;
}

std::size_t select_action(const QValues& q, double epsilon, Rng& rng) {
    for (double v : q)
        if (!std::isfinite(v)) throw std::invalid_argument("select_action: non-finite Q value");
    if (epsilon < 0.0 || epsilon > 1.0)
        throw std::invalid_argument("select_action: epsilon must be in [0, 1]");
    if (rng.uniform() < epsilon) return rng.uniform_index(kNumActions);
    return argmax_action(q);
}

double td_target(double reward, const QValues& next_q, double gamma, bool terminal) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("td_target: gamma must be in [0, 1]");
    if (terminal) return reward;
    return reward + gamma * next_q[argmax_action(next_q)];
}

}  // namespace primnav
