#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "primnav/geometry.hpp"

namespace primnav {

/// Cubic Bezier control points (n = 3), meters.
struct ControlPoints {
    std::array<Vec3, 4> p;
};

/// One of the 18 discrete actions: a body-frame end displacement realized
/// as a cubic Bezier displacement curve (x forward, y left, z up).
struct MotionPrimitive {
    std::size_t id = 0;
    Vec3 end_displacement;
};

/// B_{n,i}(t) = (1-t)^(n-i) * t^i. The binomial coefficient is applied in
/// bezier_eval.
double bernstein(int n, int i, double t);

/// C(t) = sum_i binom(n,i) P_i B_{n,i}(t) per axis, n = 3.
Vec3 bezier_eval(const ControlPoints& cp, double t);

/// Default 18-primitive set: forward component in {0, s} crossed with nine
/// lateral/vertical offsets {(0,0), (+-s,0), (0,+-s), (+-s,+-s)}, s =
/// primitive_scale. Nine forward-moving and nine non-forward primitives,
/// including hover (id 0).
std::vector<MotionPrimitive> action_set(double primitive_scale = 1.0);

/// Override file: one primitive per line, "id dx dy dz" in meters.
std::vector<MotionPrimitive> load_action_set(const std::string& text);

/// Builds the world-frame curve: P0 = start, P3 = start + R_yaw * end
/// displacement, with P1 = P0 and P2 = P3 (zero endpoint velocity, so
/// concatenated primitives join smoothly).
ControlPoints primitive_to_curve(const Vec3& start_position, double yaw,
                                 const MotionPrimitive& prim);

/// Evaluates at t = k / (n_samples - 1), k = 0 .. n_samples-1.
std::vector<Vec3> sample_curve(const ControlPoints& cp, std::size_t n_samples);

}  // namespace primnav
