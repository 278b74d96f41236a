#include "primnav/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace primnav {

std::size_t Tensor::element_count(const std::vector<std::size_t>& dims) {
    std::size_t n = 1;
    for (std::size_t d : dims) n *= d;
    return n;
}

void Tensor::reshape(const std::vector<std::size_t>& dims) {
    shape = dims;
    data.assign(element_count(dims), 0.0);
}

void Tensor::fill(double v) {
    for (double& x : data) x = v;
}

bool Tensor::all_finite() const {
    for (double x : data)
        if (!std::isfinite(x)) return false;
    return true;
}

std::vector<double> flatten(const std::vector<Tensor>& tensors) {
    std::vector<double> out;
    out.reserve(total_size(tensors));
    for (const Tensor& t : tensors) out.insert(out.end(), t.data.begin(), t.data.end());
    return out;
}

void unflatten(std::span<const double> flat, std::vector<Tensor>& tensors) {
    if (flat.size() != total_size(tensors))
        throw std::invalid_argument("unflatten: size mismatch");
    std::size_t off = 0;
    for (Tensor& t : tensors) {
        for (double& x : t.data) x = flat[off++];
    }
}

std::size_t total_size(const std::vector<Tensor>& tensors) {
    std::size_t n = 0;
    for (const Tensor& t : tensors) n += t.size();
    return n;
}

}  // namespace primnav
