#include "primnav/depthcam.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace primnav {

void CameraIntrinsics::validate() const {
    if (!(hfov > 0.0 && hfov < 3.14159265358979323846) ||
        !(vfov > 0.0 && vfov < 3.14159265358979323846))
        throw std::invalid_argument("camera: FOV must be in (0, pi)");
    if (!(max_range > 0.0)) throw std::invalid_argument("camera: max_range must be > 0");
}

DepthImage render(const WorldSpec& world, const Vec3& camera_position, double yaw,
                  const CameraIntrinsics& intrinsics) {
    intrinsics.validate();
    const double tan_h = std::tan(0.5 * intrinsics.hfov);
    const double tan_v = std::tan(0.5 * intrinsics.vfov);

    DepthImage image;
    for (std::size_t row = 0; row < kDepthSize; ++row) {
        // Row 0 looks up (+z), column 0 looks left (+y in the body frame).
        const double v = (2.0 * (static_cast<double>(row) + 0.5) / kDepthSize - 1.0) * tan_v;
        for (std::size_t col = 0; col < kDepthSize; ++col) {
            const double u = (2.0 * (static_cast<double>(col) + 0.5) / kDepthSize - 1.0) * tan_h;
            const Vec3 body_dir{1.0, -u, -v};
            const Vec3 dir = yaw_rotate(body_dir, yaw).normalized();
            double value = 1.0;
            if (auto t = ray_intersect(world, camera_position, dir)) {
                // z-depth: distance projected on the optical axis.
                const double axial = *t * yaw_rotate({1.0, 0.0, 0.0}, yaw).dot(dir);
                value = std::min(axial, intrinsics.max_range) / intrinsics.max_range;
            }
            image.at(row, col) = value;
        }
    }
    return image;
}

DepthImage add_noise(const DepthImage& image, NoiseModel model, double sigma, Rng& rng) {
    if (sigma < 0.0) throw std::invalid_argument("add_noise: sigma must be >= 0");
    if (model == NoiseModel::none || sigma == 0.0) return image;
    DepthImage out;
    for (std::size_t i = 0; i < kDepthPixels; ++i)
        out.values[i] = std::clamp(image.values[i] + sigma * rng.gaussian(), 0.0, 1.0);
    return out;
}

std::string to_pgm(const DepthImage& image) {
    std::ostringstream oss;
    oss << "P2\n" << kDepthSize << ' ' << kDepthSize << "\n255\n";
    for (std::size_t row = 0; row < kDepthSize; ++row) {
        for (std::size_t col = 0; col < kDepthSize; ++col) {
            oss << static_cast<int>(std::lround(image.at(row, col) * 255.0));
            oss << (col + 1 == kDepthSize ? '\n' : ' ');
        }
    }
    return oss.str();
}

}  // namespace primnav
