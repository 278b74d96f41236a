#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "primnav/geometry.hpp"

namespace primnav {

struct BoxObstacle {
    Vec3 min, max;  // axis-aligned corners, min < max per axis
};

struct SphereObstacle {
    Vec3 center;
    double radius = 0.0;
};

using Obstacle = std::variant<BoxObstacle, SphereObstacle>;

/// The a-priori straight line from start to goal.
struct RoughPath {
    Vec3 start, end;
    Vec3 direction;  // unit
    double length = 0.0;

    static RoughPath between(const Vec3& start, const Vec3& end);
};

struct WorldSpec {
    std::string name;
    std::vector<Obstacle> obstacles;
    Vec3 bounds_min, bounds_max;
    RoughPath path;

    /// True when every bound is finite; infinite bounds are used by tests
    /// that want open space.
    bool bounded() const;

    /// Checks all structural invariants; throws std::runtime_error on
    /// violation.
    void validate() const;
};

/// Parses the plain-text world format:
///   name <string> | bounds <x0 y0 z0 x1 y1 z1> | path <sx sy sz ex ey ez>
///   box <x0 y0 z0 x1 y1 z1> | sphere <cx cy cz r> | # comment
/// Syntax problems report the offending line number.
WorldSpec load_world(const std::string& text);
WorldSpec load_world_file(const std::string& file_path);
std::string save_world(const WorldSpec& world);

/// The 10 built-in environments: 7 training tracks (obstacle-free, two
/// corridors, two left-right slaloms, two up-down slaloms) and 3 test
/// corridors with mixed obstacles. Each has a straight 60 m path along +x.
std::vector<WorldSpec> builtin_envs();
WorldSpec builtin_env(const std::string& name);
std::vector<std::string> builtin_env_names();

/// Signed distance from a point to the obstacle surface (negative inside).
double signed_distance(const Obstacle& obstacle, const Vec3& point);

/// True iff the sphere of the given radius centered at `point` intersects
/// any obstacle or pokes outside the world bounds. Boundary contact at
/// exactly `radius` does not collide (strict inequality).
bool collision_check(const WorldSpec& world, const Vec3& point, double radius);

/// Index of the first waypoint in collision, if any.
std::optional<std::size_t> sweep_collision(const WorldSpec& world,
                                           std::span<const Vec3> waypoints, double radius);

/// Nearest positive hit distance along a unit-direction ray, against all
/// obstacles and the inside of the world bounds. nullopt when nothing
/// finite is hit.
std::optional<double> ray_intersect(const WorldSpec& world, const Vec3& origin,
                                    const Vec3& direction);

/// Forward progress along the path, clamped to [0, length].
double path_progress(const RoughPath& path, const Vec3& position);

/// Perpendicular distance from the infinite line through the path.
double path_deviation(const RoughPath& path, const Vec3& position);

}  // namespace primnav
