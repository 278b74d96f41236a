#include "primnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace primnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Signed distance to an axis-aligned box given by corners (negative inside).
/// Written in min/max form so infinite extents stay NaN-free.
double box_signed_distance(const Vec3& lo, const Vec3& hi, const Vec3& p) {
    const double qx = std::max(lo.x - p.x, p.x - hi.x);
    const double qy = std::max(lo.y - p.y, p.y - hi.y);
    const double qz = std::max(lo.z - p.z, p.z - hi.z);
    const double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = std::max(qz, 0.0);
    const double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
    const double inside = std::min(std::max({qx, qy, qz}), 0.0);
    return outside + inside;
}

/// Slab test; returns [t_near, t_far] or nullopt on miss.
std::optional<std::pair<double, double>> ray_box(const Vec3& lo, const Vec3& hi, const Vec3& o,
                                                 const Vec3& d) {
    double tn = -kInf, tf = kInf;
    const double os[3] = {o.x, o.y, o.z};
    const double ds[3] = {d.x, d.y, d.z};
    const double ls[3] = {lo.x, lo.y, lo.z};
    const double hs[3] = {hi.x, hi.y, hi.z};
    for (int a = 0; a < 3; ++a) {
        if (ds[a] == 0.0) {
            if (os[a] < ls[a] || os[a] > hs[a]) return std::nullopt;
            continue;
        }
        double t0 = (ls[a] - os[a]) / ds[a];
        double t1 = (hs[a] - os[a]) / ds[a];
        if (t0 > t1) std::swap(t0, t1);
        tn = std::max(tn, t0);
        tf = std::min(tf, t1);
        if (tn > tf) return std::nullopt;
    }
    return std::make_pair(tn, tf);
}

std::optional<double> ray_sphere(const SphereObstacle& s, const Vec3& o, const Vec3& d) {
    const Vec3 oc = o - s.center;
    const double b = oc.dot(d);
    const double c = oc.dot(oc) - s.radius * s.radius;
    const double disc = b * b - c;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double t0 = -b - root;
    if (t0 > 0.0) return t0;
    const double t1 = -b + root;
    if (t1 > 0.0) return t1;
    return std::nullopt;
}

std::vector<double> parse_numbers(std::istringstream& iss, std::size_t count, std::size_t line_no,
                                  const std::string& keyword) {
    std::vector<double> vals(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(iss >> vals[i]))
            throw std::runtime_error("world parse error at line " + std::to_string(line_no) +
                                     ": '" + keyword + "' expects " + std::to_string(count) +
                                     " numbers");
    }
    return vals;
}

void append_number(std::ostringstream& oss, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    oss << ' ' << buf;
}

}  // namespace

RoughPath RoughPath::between(const Vec3& start, const Vec3& end) {
    RoughPath p;
    p.start = start;
    p.end = end;
    const Vec3 delta = end - start;
    p.length = delta.norm();
    if (p.length <= 0.0) throw std::runtime_error("rough path: start equals end");
    p.direction = delta * (1.0 / p.length);
    return p;
}

bool WorldSpec::bounded() const { return bounds_min.finite() && bounds_max.finite(); }

void WorldSpec::validate() const {
    if (path.length <= 0.0) throw std::runtime_error("world '" + name + "': degenerate path");
    for (const Obstacle& ob : obstacles) {
        if (const auto* box = std::get_if<BoxObstacle>(&ob)) {
            if (!(box->min.x < box->max.x && box->min.y < box->max.y && box->min.z < box->max.z))
                throw std::runtime_error("world '" + name + "': box min must be < max per axis");
        } else {
            const auto& s = std::get<SphereObstacle>(ob);
            if (!(s.radius > 0.0))
                throw std::runtime_error("world '" + name + "': sphere radius must be > 0");
        }
    }
    if (!(bounds_min.x < bounds_max.x && bounds_min.y < bounds_max.y &&
          bounds_min.z < bounds_max.z))
        throw std::runtime_error("world '" + name + "': bounds min must be < max per axis");
    if (bounded()) {
        auto inside = [&](const Vec3& p) {
            return p.x > bounds_min.x && p.x < bounds_max.x && p.y > bounds_min.y &&
                   p.y < bounds_max.y && p.z > bounds_min.z && p.z < bounds_max.z;
        };
        if (!inside(path.start) || !inside(path.end))
            throw std::runtime_error("world '" + name + "': path endpoints must lie inside bounds");
    }
}

WorldSpec load_world(const std::string& text) {
    WorldSpec w;
    w.bounds_min = {-kInf, -kInf, -kInf};
    w.bounds_max = {kInf, kInf, kInf};
    bool have_path = false;
    std::istringstream input(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream iss(line);
        std::string keyword;
        if (!(iss >> keyword)) continue;
        if (keyword == "name") {
            std::string rest;
            std::getline(iss, rest);
            const auto first = rest.find_first_not_of(" \t");
            w.name = first == std::string::npos ? "" : rest.substr(first);
        } else if (keyword == "bounds") {
            auto v = parse_numbers(iss, 6, line_no, keyword);
            w.bounds_min = {v[0], v[1], v[2]};
            w.bounds_max = {v[3], v[4], v[5]};
        } else if (keyword == "path") {
            auto v = parse_numbers(iss, 6, line_no, keyword);
            w.path = RoughPath::between({v[0], v[1], v[2]}, {v[3], v[4], v[5]});
            have_path = true;
        } else if (keyword == "box") {
            auto v = parse_numbers(iss, 6, line_no, keyword);
            w.obstacles.push_back(BoxObstacle{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
        } else if (keyword == "sphere") {
            auto v = parse_numbers(iss, 4, line_no, keyword);
            w.obstacles.push_back(SphereObstacle{{v[0], v[1], v[2]}, v[3]});
        } else {
            throw std::runtime_error("world parse error at line " + std::to_string(line_no) +
                                     ": unknown keyword '" + keyword + "'");
        }
    }
    if (!have_path) throw std::runtime_error("world parse error: missing 'path' statement");
    w.validate();
    return w;
}

WorldSpec load_world_file(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw std::runtime_error("cannot open world file: " + file_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_world(ss.str());
}

std::string save_world(const WorldSpec& world) {
    std::ostringstream oss;
    if (!world.name.empty()) oss << "name " << world.name << "\n";
    oss << "bounds";
    for (double v : {world.bounds_min.x, world.bounds_min.y, world.bounds_min.z,
                     world.bounds_max.x, world.bounds_max.y, world.bounds_max.z})
        append_number(oss, v);
    oss << "\npath";
    for (double v : {world.path.start.x, world.path.start.y, world.path.start.z, world.path.end.x,
                     world.path.end.y, world.path.end.z})
        append_number(oss, v);
    oss << "\n";
    for (const Obstacle& ob : world.obstacles) {
        if (const auto* box = std::get_if<BoxObstacle>(&ob)) {
            oss << "box";
            for (double v :
                 {box->min.x, box->min.y, box->min.z, box->max.x, box->max.y, box->max.z})
                append_number(oss, v);
        } else {
            const auto& s = std::get<SphereObstacle>(ob);
            oss << "sphere";
            for (double v : {s.center.x, s.center.y, s.center.z, s.radius}) append_number(oss, v);
        }
        oss << "\n";
    }
    return oss.str();
}

double signed_distance(const Obstacle& obstacle, const Vec3& point) {
    if (const auto* box = std::get_if<BoxObstacle>(&obstacle))
        return box_signed_distance(box->min, box->max, point);
    const auto& s = std::get<SphereObstacle>(obstacle);
    return (point - s.center).norm() - s.radius;
}

bool collision_check(const WorldSpec& world, const Vec3& point, double radius) {
    for (const Obstacle& ob : world.obstacles)
        if (signed_distance(ob, point) < radius) return true;
    // Bounds act as walls: colliding with them (or being outside) is a crash.
    const double sd_bounds = box_signed_distance(world.bounds_min, world.bounds_max, point);
    return -sd_bounds < radius;
}

std::optional<std::size_t> sweep_collision(const WorldSpec& world,
                                           std::span<const Vec3> waypoints, double radius) {
    for (std::size_t i = 0; i < waypoints.size(); ++i)
        if (collision_check(world, waypoints[i], radius)) return i;
    return std::nullopt;
}

std::optional<double> ray_intersect(const WorldSpec& world, const Vec3& origin,
                                    const Vec3& direction) {
    if (std::abs(direction.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("ray_intersect: direction must be a unit vector");
    double best = kInf;
    for (const Obstacle& ob : world.obstacles) {
        if (const auto* box = std::get_if<BoxObstacle>(&ob)) {
            if (auto hit = ray_box(box->min, box->max, origin, direction)) {
                const double t = hit->first > 0.0 ? hit->first : hit->second;
                if (t > 0.0) best = std::min(best, t);
            }
        } else if (auto t = ray_sphere(std::get<SphereObstacle>(ob), origin, direction)) {
            best = std::min(best, *t);
        }
    }
    // Bounds seen from inside: the exit point is a wall hit.
    if (auto hit = ray_box(world.bounds_min, world.bounds_max, origin, direction)) {
        if (hit->second > 0.0 && std::isfinite(hit->second)) best = std::min(best, hit->second);
    }
    if (!std::isfinite(best)) return std::nullopt;
    return best;
}

double path_progress(const RoughPath& path, const Vec3& position) {
    const double along = (position - path.start).dot(path.direction);
    return std::clamp(along, 0.0, path.length);
}

double path_deviation(const RoughPath& path, const Vec3& position) {
    const Vec3 rel = position - path.start;
    const double along = rel.dot(path.direction);
    const Vec3 perp = rel - path.direction * along;
    return perp.norm();
}

std::vector<std::string> builtin_env_names() {
    return {"obstacle_free", "corridor_wide", "corridor_narrow", "slalom_lr_1", "slalom_lr_2",
            "slalom_ud_1",   "slalom_ud_2",   "test_mixed_1",    "test_mixed_2", "test_mixed_3"};
}

namespace {

WorldSpec base_track(const std::string& name) {
    WorldSpec w;
    w.name = name;
    w.bounds_min = {-5.0, -12.0, -6.0};
    w.bounds_max = {70.0, 12.0, 6.0};
    w.path = RoughPath::between({0.0, 0.0, 0.0}, {60.0, 0.0, 0.0});
    return w;
}

void add_corridor_walls(WorldSpec& w, double half_width) {
    // Two parallel walls along the whole track, 1 m thick, full height.
    w.obstacles.push_back(BoxObstacle{{-5.0, half_width, -6.0}, {70.0, half_width + 1.0, 6.0}});
    w.obstacles.push_back(BoxObstacle{{-5.0, -half_width - 1.0, -6.0}, {70.0, -half_width, 6.0}});
}

/// Vertical slalom gate at station x: a wall with a lateral gap [gap_lo, gap_up] in y.
void add_lr_gate(WorldSpec& w, double x, double gap_lo, double gap_hi) {
    w.obstacles.push_back(BoxObstacle{{x, -12.0, -6.0}, {x + 1.0, gap_lo, 6.0}});
    w.obstacles.push_back(BoxObstacle{{x, gap_hi, -6.0}, {x + 1.0, 12.0, 6.0}});
}

/// Horizontal slalom gate at station x: a wall with a gap [gap_lo, gap_hi] in z.
void add_ud_gate(WorldSpec& w, double x, double gap_lo, double gap_hi) {
    w.obstacles.push_back(BoxObstacle{{x, -12.0, -6.0}, {x + 1.0, 12.0, gap_lo}});
    w.obstacles.push_back(BoxObstacle{{x, -12.0, gap_hi}, {x + 1.0, 12.0, 6.0}});
}

}  // namespace

std::vector<WorldSpec> builtin_envs() {
    std::vector<WorldSpec> envs;

    envs.push_back(base_track("obstacle_free"));

    WorldSpec wide = base_track("corridor_wide");
    add_corridor_walls(wide, 4.0);  // 8 m wide
    envs.push_back(wide);

    WorldSpec narrow = base_track("corridor_narrow");
    add_corridor_walls(narrow, 2.0);  // 4 m wide
    envs.push_back(narrow);

    // Left-right slaloms: gates with 3 m gaps alternating off the path line,
    // so the straight line is blocked and lateral deviation is forced.
    WorldSpec lr1 = base_track("slalom_lr_1");
    for (int i = 0; i < 5; ++i) {
        const double x = 10.0 + 10.0 * i;
        const double center = (i % 2 == 0) ? 3.0 : -3.0;
        add_lr_gate(lr1, x, center - 1.5, center + 1.5);
    }
    envs.push_back(lr1);

    WorldSpec lr2 = base_track("slalom_lr_2");
    for (int i = 0; i < 5; ++i) {
        const double x = 8.0 + 12.0 * i;
        const double center = (i % 2 == 0) ? -3.5 : 3.5;
        add_lr_gate(lr2, x, center - 1.75, center + 1.75);
    }
    envs.push_back(lr2);

    // Up-down slaloms: same idea with gaps in z.
    WorldSpec ud1 = base_track("slalom_ud_1");
    for (int i = 0; i < 5; ++i) {
        const double x = 10.0 + 10.0 * i;
        const double center = (i % 2 == 0) ? 2.0 : -2.0;
        add_ud_gate(ud1, x, center - 1.5, center + 1.5);
    }
    envs.push_back(ud1);

    WorldSpec ud2 = base_track("slalom_ud_2");
    for (int i = 0; i < 5; ++i) {
        const double x = 8.0 + 12.0 * i;
        const double center = (i % 2 == 0) ? -2.0 : 2.0;
        add_ud_gate(ud2, x, center - 1.75, center + 1.75);
    }
    envs.push_back(ud2);

    // Test corridors with mixed box/sphere obstacles of varied sizes.
    WorldSpec t1 = base_track("test_mixed_1");
    add_corridor_walls(t1, 5.0);
    t1.obstacles.push_back(SphereObstacle{{12.0, 1.5, 0.0}, 1.5});
    t1.obstacles.push_back(BoxObstacle{{24.0, -5.0, -6.0}, {26.0, -0.5, 6.0}});
    t1.obstacles.push_back(SphereObstacle{{36.0, -2.0, 1.0}, 1.0});
    t1.obstacles.push_back(BoxObstacle{{44.0, 0.5, -2.0}, {46.0, 5.0, 2.0}});
    t1.obstacles.push_back(SphereObstacle{{54.0, 0.5, 0.0}, 2.0});
    envs.push_back(t1);

    WorldSpec t2 = base_track("test_mixed_2");
    t2.obstacles.push_back(SphereObstacle{{15.0, -2.0, 0.0}, 2.0});
    t2.obstacles.push_back(BoxObstacle{{30.0, 1.0, -1.5}, {33.0, 4.0, 1.5}});
    t2.obstacles.push_back(SphereObstacle{{45.0, 0.0, 2.5}, 1.5});
    envs.push_back(t2);

    WorldSpec t3 = base_track("test_mixed_3");
    add_corridor_walls(t3, 6.0);
    t3.obstacles.push_back(BoxObstacle{{10.0, -6.0, -6.0}, {11.0, 1.0, 6.0}});
    t3.obstacles.push_back(SphereObstacle{{20.0, 2.5, 0.0}, 1.2});
    t3.obstacles.push_back(SphereObstacle{{28.0, -2.5, -1.0}, 1.8});
    t3.obstacles.push_back(BoxObstacle{{38.0, -1.0, 1.0}, {40.0, 6.0, 6.0}});
    t3.obstacles.push_back(SphereObstacle{{48.0, -1.5, 0.5}, 1.0});
    t3.obstacles.push_back(BoxObstacle{{55.0, -6.0, -6.0}, {56.0, -0.5, 6.0}});
    envs.push_back(t3);

    for (WorldSpec& w : envs) w.validate();
    return envs;
}

WorldSpec builtin_env(const std::string& name) {
    for (WorldSpec& w : builtin_envs())
        if (w.name == name) return std::move(w);
    throw std::runtime_error("unknown builtin environment: " + name);
}

}  // namespace primnav
