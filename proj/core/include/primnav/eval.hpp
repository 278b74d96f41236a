#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "primnav/dqn.hpp"
#include "primnav/env.hpp"
#include "primnav/world.hpp"

namespace primnav {

/// One Table-style result row.
struct EpisodeResult {
    std::string env;
    std::size_t trial = 0;
    double navigation_distance = 0.0;  // m, forward progress along the path
    double navigation_time = 0.0;      // s, steps * step_duration
    bool crash = false;
    double total_reward = 0.0;
    SimStatus status = SimStatus::running;
};

struct EvalConfig {
    EnvConfig env;
    std::uint64_t base_seed = 0;

    EvalConfig() {
        // Five-trial protocol default: mild depth noise so trials of a
        // deterministic policy actually differ.
        env.noise_model = NoiseModel::gaussian;
        env.noise_sigma = 0.02;
    }
};

using Policy = std::function<std::size_t(const Observation&)>;

/// Runs `trials` greedy episodes (argmax policy, 120-step cap by default).
/// Per-trial noise streams are derived from base_seed, the world name, and
/// the trial index, so results are reproducible and order-independent.
std::vector<EpisodeResult> evaluate(const QNetwork& network, const WorldSpec& world,
                                    std::size_t trials, const EvalConfig& config);

/// Same protocol with an arbitrary policy (test hook for scripted agents).
std::vector<EpisodeResult> evaluate_policy(const Policy& policy, const WorldSpec& world,
                                           std::size_t trials, const EvalConfig& config);

struct EnvSummary {
    std::string env;
    std::size_t trials = 0;
    double success_rate = 0.0;   // reached the goal
    double crash_rate = 0.0;
    double deviation_rate = 0.0;
    double timeout_rate = 0.0;
    double mean_time = 0.0;
    double mean_reward = 0.0;
};

/// Per-environment rates and means, in first-appearance order.
std::vector<EnvSummary> summarize(const std::vector<EpisodeResult>& results);

/// Fraction of all trials that ended without a crash.
double crash_free_fraction(const std::vector<EpisodeResult>& results);

/// CSV rows: env,trial,navigation_distance_m,navigation_time_s,crash,total_reward
std::string results_csv(const std::vector<EpisodeResult>& results);

/// Reward-curve export: per-episode values smoothed with a trailing moving
/// average, one polyline point per episode.
std::string curves_svg(std::span<const double> values, std::size_t window);

/// Episode trace: step,x,y,z,action,reward,status
struct TraceRow {
    std::size_t step = 0;
    Vec3 position;
    std::size_t action = 0;
    double reward = 0.0;
    SimStatus status = SimStatus::running;
};

std::string trace_csv(const std::vector<TraceRow>& rows);

}  // namespace primnav
