#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "primnav/geometry.hpp"
#include "primnav/rng.hpp"
#include "primnav/world.hpp"

namespace primnav {

inline constexpr std::size_t kDepthSize = 32;
inline constexpr std::size_t kDepthPixels = kDepthSize * kDepthSize;

struct CameraIntrinsics {
    double hfov = 1.571;      // radians, ~90 deg
    double vfov = 1.047;      // radians, ~60 deg
    double max_range = 20.0;  // meters

    void validate() const;
};

/// 32x32 normalized depth observation. Values are axial depth / max_range,
/// clipped to [0, 1]; misses encode as 1. Row 0 is the top of the image,
/// column 0 the left.
struct DepthImage {
    std::array<double, kDepthPixels> values{};

    double& at(std::size_t row, std::size_t col) { return values[row * kDepthSize + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * kDepthSize + col]; }
};

/// Raycasts the front-facing pinhole camera: optical axis along body +x
/// (yaw-rotated), up = world +z, linear image-plane pixel spacing.
DepthImage render(const WorldSpec& world, const Vec3& camera_position, double yaw,
                  const CameraIntrinsics& intrinsics = {});

enum class NoiseModel { none, gaussian };

/// Additive per-pixel noise, re-clipped to [0, 1]. `none` is the identity.
DepthImage add_noise(const DepthImage& image, NoiseModel model, double sigma, Rng& rng);

/// Plain-text PGM (P2) dump, maxval 255.
std::string to_pgm(const DepthImage& image);

}  // namespace primnav
