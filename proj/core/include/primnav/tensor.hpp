#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace primnav {

/// Dense row-major tensor of 64-bit reals. All network quantities live in
/// these; shape is carried at runtime and validated at layer-build time.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::initializer_list<std::size_t> dims) { reshape(dims); }
    explicit Tensor(const std::vector<std::size_t>& dims) { reshape(dims); }

    static std::size_t element_count(const std::vector<std::size_t>& dims);

    void reshape(const std::vector<std::size_t>& dims);
    std::size_t size() const { return data.size(); }
    void fill(double v);

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    bool all_finite() const;
};

/// Flattens a parameter set into one contiguous vector (checkpointing,
/// finite differences). unflatten is the exact inverse.
std::vector<double> flatten(const std::vector<Tensor>& tensors);
void unflatten(std::span<const double> flat, std::vector<Tensor>& tensors);

std::size_t total_size(const std::vector<Tensor>& tensors);

}  // namespace primnav
