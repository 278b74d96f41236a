#include "primnav/bezier.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace primnav {

double bernstein(int n, int i, double t) {
    if (i < 0 || i > n) throw std::invalid_argument("bernstein: require 0 <= i <= n");
    return std::pow(1.0 - t, n - i) * std::pow(t, i);
}

Vec3 bezier_eval(const ControlPoints& cp, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("bezier_eval: t must be in [0, 1]");
    static constexpr double kBinomial[4] = {1.0, 3.0, 3.0, 1.0};
    Vec3 out;
    for (int i = 0; i <= 3; ++i) out += cp.p[i] * (kBinomial[i] * bernstein(3, i, t));
    return out;
}

std::vector<MotionPrimitive> action_set(double primitive_scale) {
    if (!(primitive_scale > 0.0))
        throw std::invalid_argument("action_set: primitive_scale must be > 0");
    const double s = primitive_scale;
    const double lateral[9][2] = {{0, 0},  {s, 0},  {-s, 0}, {0, s},  {0, -s},
                                  {s, s},  {s, -s}, {-s, s}, {-s, -s}};
    std::vector<MotionPrimitive> set;
    set.reserve(18);
    std::size_t id = 0;
    for (double dx : {0.0, s})
        for (const auto& yz : lateral)
            set.push_back({id++, Vec3{dx, yz[0], yz[1]}});
    return set;
}

std::vector<MotionPrimitive> load_action_set(const std::string& text) {
    std::vector<MotionPrimitive> set;
    std::istringstream input(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream iss(line);
        MotionPrimitive prim;
        if (!(iss >> prim.id)) continue;  // blank line
        if (!(iss >> prim.end_displacement.x >> prim.end_displacement.y >>
              prim.end_displacement.z))
            throw std::runtime_error("action set parse error at line " + std::to_string(line_no) +
                                     ": expected 'id dx dy dz'");
        set.push_back(prim);
    }
    if (set.size() != 18)
        throw std::runtime_error("action set must contain exactly 18 primitives, got " +
                                 std::to_string(set.size()));
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set[i].id != i)
            throw std::runtime_error("action set ids must be dense 0..17 in order");
    return set;
}

ControlPoints primitive_to_curve(const Vec3& start_position, double yaw,
                                 const MotionPrimitive& prim) {
    const Vec3 end = start_position + yaw_rotate(prim.end_displacement, yaw);
    return ControlPoints{{start_position, start_position, end, end}};
}

std::vector<Vec3> sample_curve(const ControlPoints& cp, std::size_t n_samples) {
    if (n_samples < 2) throw std::invalid_argument("sample_curve: need at least 2 samples");
    std::vector<Vec3> samples;
    samples.reserve(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k)
        samples.push_back(
            bezier_eval(cp, static_cast<double>(k) / static_cast<double>(n_samples - 1)));
    return samples;
}

}  // namespace primnav
