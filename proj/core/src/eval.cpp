#include "primnav/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "primnav/trainer.hpp"

namespace primnav {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<EpisodeResult> run_trials(const Policy& policy, const WorldSpec& world,
                                      std::size_t trials, const EvalConfig& config) {
    if (trials < 1) throw std::invalid_argument("evaluate: trials must be >= 1");
    std::vector<EpisodeResult> results;
    results.reserve(trials);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng noise_rng(derive_seed(config.base_seed, fnv1a(world.name), trial));
        auto [state, obs] = reset(world, config.env, &noise_rng);
        while (state.status == SimStatus::running) {
            const std::size_t action = policy(obs);
            StepResult sr = step(state, action, world, config.env, &noise_rng);
            obs = std::move(sr.observation);
        }
        EpisodeResult r;
        r.env = world.name;
        r.trial = trial;
        r.navigation_distance = path_progress(world.path, state.vehicle_position);
        r.navigation_time = static_cast<double>(state.step_index) * config.env.step_duration;
        r.crash = state.status == SimStatus::crashed;
        r.total_reward = state.cumulative_reward;
        r.status = state.status;
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace

std::vector<EpisodeResult> evaluate(const QNetwork& network, const WorldSpec& world,
                                    std::size_t trials, const EvalConfig& config) {
    Policy greedy = [&network](const Observation& obs) {
        return argmax_action(network.forward(obs.depth, obs.relative_position));
    };
    return run_trials(greedy, world, trials, config);
}

std::vector<EpisodeResult> evaluate_policy(const Policy& policy, const WorldSpec& world,
                                           std::size_t trials, const EvalConfig& config) {
    return run_trials(policy, world, trials, config);
}

std::vector<EnvSummary> summarize(const std::vector<EpisodeResult>& results) {
    if (results.empty()) throw std::invalid_argument("summarize: empty result set");
    std::vector<EnvSummary> summaries;
    for (const EpisodeResult& r : results) {
        auto it = std::find_if(summaries.begin(), summaries.end(),
                               [&](const EnvSummary& s) { return s.env == r.env; });
        if (it == summaries.end()) {
            summaries.push_back(EnvSummary{r.env});
            it = summaries.end() - 1;
        }
        it->trials += 1;
        it->success_rate += r.status == SimStatus::goal_reached ? 1.0 : 0.0;
        it->crash_rate += r.status == SimStatus::crashed ? 1.0 : 0.0;
        it->deviation_rate += r.status == SimStatus::deviated ? 1.0 : 0.0;
        it->timeout_rate += r.status == SimStatus::timed_out ? 1.0 : 0.0;
        it->mean_time += r.navigation_time;
        it->mean_reward += r.total_reward;
    }
    for (EnvSummary& s : summaries) {
        const double n = static_cast<double>(s.trials);
        s.success_rate /= n;
        s.crash_rate /= n;
        s.deviation_rate /= n;
        s.timeout_rate /= n;
        s.mean_time /= n;
        s.mean_reward /= n;
    }
    return summaries;
}

double crash_free_fraction(const std::vector<EpisodeResult>& results) {
    if (results.empty()) throw std::invalid_argument("crash_free_fraction: empty result set");
    std::size_t safe = 0;
    for (const EpisodeResult& r : results)
        if (!r.crash) ++safe;
    return static_cast<double>(safe) / static_cast<double>(results.size());
}

std::string results_csv(const std::vector<EpisodeResult>& results) {
    std::ostringstream oss;
    oss << "env,trial,navigation_distance_m,navigation_time_s,crash,total_reward\n";
    for (const EpisodeResult& r : results) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%s,%zu,%.2f,%g,%c,%.2f\n", r.env.c_str(), r.trial,
                      r.navigation_distance, r.navigation_time, r.crash ? 'Y' : 'N',
                      r.total_reward);
        oss << buf;
    }
    return oss.str();
}

std::string curves_svg(std::span<const double> values, std::size_t window) {
    if (values.empty()) throw std::invalid_argument("curves_svg: no values");
    const std::vector<double> smooth = moving_average(values, window);
    double lo = smooth[0], hi = smooth[0];
    for (double v : smooth) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;

    const double width = 800.0, height = 400.0, margin = 40.0;
    auto px = [&](std::size_t i) {
        return margin + (width - 2 * margin) *
                            (smooth.size() == 1
                                 ? 0.0
                                 : static_cast<double>(i) / static_cast<double>(smooth.size() - 1));
    };
    auto py = [&](double v) { return height - margin - (height - 2 * margin) * (v - lo) / (hi - lo); };

    std::ostringstream oss;
    oss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    oss << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    oss << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    oss << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    oss << "  <text x=\"" << width / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-size=\"12\">episode</text>\n";
    oss << "  <text x=\"12\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 12 "
        << height / 2 << ")\">average reward</text>\n";
    oss << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < smooth.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", px(i), py(smooth[i]));
        oss << buf;
    }
    oss << "\"/>\n</svg>\n";
    return oss.str();
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
    std::ostringstream oss;
    oss << "step,x,y,z,action,reward,status\n";
    for (const TraceRow& r : rows) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%zu,%.6f,%s\n", r.step, r.position.x,
                      r.position.y, r.position.z, r.action, r.reward, to_string(r.status));
        oss << buf;
    }
    return oss.str();
}

}  // namespace primnav
