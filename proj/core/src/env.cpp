#include "primnav/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace primnav {

void RewardParams::validate() const {
    if (!(lower_bound < upper_bound))
        throw std::invalid_argument("reward: lower bound must be < upper bound");
    if (!(delta_d_lower < delta_d_upper))
        throw std::invalid_argument("reward: delta_d bounds out of order");
    if (!(collision_penalty <= deviation_penalty && deviation_penalty < 0.0))
        throw std::invalid_argument("reward: require R_cp <= R_dp < 0");
    if (!(distance_clamp > 0.0))
        throw std::invalid_argument("reward: distance clamp must be > 0");
}

const char* to_string(SimStatus status) {
    switch (status) {
        case SimStatus::running: return "running";
        case SimStatus::goal_reached: return "goal_reached";
        case SimStatus::crashed: return "crashed";
        case SimStatus::deviated: return "deviated";
        case SimStatus::timed_out: return "timed_out";
    }
    return "unknown";
}

SimStatus sim_status_from_string(const std::string& text) {
    for (SimStatus s : {SimStatus::running, SimStatus::goal_reached, SimStatus::crashed,
                        SimStatus::deviated, SimStatus::timed_out})
        if (text == to_string(s)) return s;
    throw std::invalid_argument("unknown sim status: " + text);
}

double reward_fn(const RewardParams& params, double delta_d, double d_t, RewardEvent event) {
    if (!(d_t >= 0.0)) throw std::invalid_argument("reward_fn: d_t must be >= 0");
    if (event == RewardEvent::collision) return params.collision_penalty;
    if (event == RewardEvent::deviation) return params.deviation_penalty;
    const double denom = std::max(d_t, params.distance_clamp);
    if (delta_d > params.delta_d_upper) return params.lower_bound / denom;
    if (delta_d < params.delta_d_lower) return params.upper_bound / denom;
    const double span = params.delta_d_upper - params.delta_d_lower;
    const double numer = params.lower_bound + (params.upper_bound - params.lower_bound) *
                                                  (params.delta_d_upper - delta_d) / span;
    return numer / denom;
}

Observation make_observation(const SimState& state, const WorldSpec& world,
                             const EnvConfig& config, Rng* noise_rng) {
    Observation obs;
    obs.depth = render(world, state.vehicle_position, state.yaw, config.camera);
    if (noise_rng && config.noise_model != NoiseModel::none)
        obs.depth = add_noise(obs.depth, config.noise_model, config.noise_sigma, *noise_rng);
    obs.relative_position =
        yaw_unrotate(state.setpoint_position - state.vehicle_position, state.yaw);
    return obs;
}

std::pair<SimState, Observation> reset(const WorldSpec& world, const EnvConfig& config,
                                       Rng* noise_rng) {
    config.reward.validate();
    SimState state;
    state.vehicle_position = world.path.start;
    state.setpoint_position = world.path.start;
    state.yaw = std::atan2(world.path.direction.y, world.path.direction.x);
    if (collision_check(world, state.vehicle_position, config.vehicle_radius))
        throw std::runtime_error("world '" + world.name + "': path start is in collision");
    return {state, make_observation(state, world, config, noise_rng)};
}

StepResult step(SimState& state, std::size_t action, const WorldSpec& world,
                const EnvConfig& config, Rng* noise_rng) {
    if (state.status != SimStatus::running)
        throw std::logic_error("step: episode already terminal");
    if (action >= config.actions.size())
        throw std::invalid_argument("step: action id out of range");

    const double d_prev = (state.setpoint_position - state.vehicle_position).norm();

    const ControlPoints curve =
        primitive_to_curve(state.vehicle_position, state.yaw, config.actions[action]);
    const std::vector<Vec3> waypoints = sample_curve(curve, config.sweep_samples);

    StepResult result;
    state.step_index += 1;

    if (auto hit = sweep_collision(world, waypoints, config.vehicle_radius)) {
        // Stop at the last free waypoint (the start pose if the first
        // sample already collides).
        state.vehicle_position = *hit == 0 ? waypoints.front() : waypoints[*hit - 1];
        state.status = SimStatus::crashed;
        result.reward = reward_fn(config.reward, 0.0, d_prev, RewardEvent::collision);
    } else {
        state.vehicle_position = waypoints.back();

        const double advance = config.setpoint_speed * config.step_duration;
        const double along = path_progress(world.path, state.setpoint_position) + advance;
        state.setpoint_position =
            world.path.start + world.path.direction * std::min(along, world.path.length);

        const double d_t = (state.setpoint_position - state.vehicle_position).norm();
        const double delta_d = d_t - d_prev;

        if (path_deviation(world.path, state.vehicle_position) > config.reward.deviation_limit) {
            state.status = SimStatus::deviated;
            result.reward = reward_fn(config.reward, delta_d, d_t, RewardEvent::deviation);
        } else {
            result.reward = reward_fn(config.reward, delta_d, d_t, RewardEvent::none);
            if (path_progress(world.path, state.vehicle_position) >= world.path.length)
                state.status = SimStatus::goal_reached;
            else if (state.step_index >= config.max_steps)
                state.status = SimStatus::timed_out;
        }
    }

    state.cumulative_reward += result.reward;
    result.terminal = state.status != SimStatus::running;
    result.observation = make_observation(state, world, config, noise_rng);
    return result;
}

}  // namespace primnav
