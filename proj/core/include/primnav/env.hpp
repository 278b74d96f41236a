#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "primnav/bezier.hpp"
#include "primnav/depthcam.hpp"
#include "primnav/geometry.hpp"
#include "primnav/rng.hpp"
#include "primnav/world.hpp"

namespace primnav {

/// Reward constants. The distance discount denominator is clamped below at
/// distance_clamp so the reward stays bounded near the setpoint.
struct RewardParams {
    double lower_bound = 0.0;        // R_l
    double upper_bound = 0.5;        // R_u
    double delta_d_lower = -1.0;     // m
    double delta_d_upper = 1.0;      // m
    double deviation_penalty = -0.5; // R_dp
    double collision_penalty = -1.0; // R_cp
    double deviation_limit = 5.0;    // m
    double distance_clamp = 1.0;     // m

    void validate() const;
};

enum class SimStatus { running, goal_reached, crashed, deviated, timed_out };

const char* to_string(SimStatus status);
SimStatus sim_status_from_string(const std::string& text);

struct EnvConfig {
    RewardParams reward;
    CameraIntrinsics camera;
    double vehicle_radius = 0.3;   // m, collision sphere
    double setpoint_speed = 1.0;   // m/s
    double step_duration = 1.0;    // s
    std::size_t max_steps = 120;
    std::size_t sweep_samples = 11;
    NoiseModel noise_model = NoiseModel::none;
    double noise_sigma = 0.0;
    std::vector<MotionPrimitive> actions = action_set(1.0);
};

struct SimState {
    Vec3 vehicle_position;
    Vec3 setpoint_position;
    double yaw = 0.0;  // fixed along the path direction for the episode
    std::size_t step_index = 0;
    double cumulative_reward = 0.0;
    SimStatus status = SimStatus::running;
};

struct Observation {
    DepthImage depth;
    Vec3 relative_position;  // body frame: setpoint relative to vehicle
};

struct Transition {
    Observation observation;
    std::size_t action = 0;
    double reward = 0.0;
    Observation next_observation;
    bool terminal = false;
};

enum class RewardEvent { none, deviation, collision };

/// The piecewise reward: collision/deviation penalties, otherwise the
/// three-branch distance-change reward discounted by max(d_t, clamp).
double reward_fn(const RewardParams& params, double delta_d, double d_t, RewardEvent event);

/// Vehicle and setpoint at the path start, status running.
std::pair<SimState, Observation> reset(const WorldSpec& world, const EnvConfig& config,
                                       Rng* noise_rng = nullptr);

Observation make_observation(const SimState& state, const WorldSpec& world,
                             const EnvConfig& config, Rng* noise_rng = nullptr);

struct StepResult {
    Observation observation;
    double reward = 0.0;
    bool terminal = false;
};

/// Executes one motion primitive: swept collision check along the Bezier
/// curve, setpoint advance, reward, termination checks, next observation.
StepResult step(SimState& state, std::size_t action, const WorldSpec& world,
                const EnvConfig& config, Rng* noise_rng = nullptr);

}  // namespace primnav
