#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "primnav/checkpoint.hpp"
#include "primnav/dqn.hpp"
#include "primnav/env.hpp"
#include "primnav/nn.hpp"
#include "primnav/world.hpp"

namespace primnav {

struct TrainConfig {
    std::size_t total_episodes = 300;
    std::size_t max_steps_per_episode = 120;
    double epsilon_start = 1.0;
    double epsilon_end = 0.1;
    double gamma_start = 0.01;
    double gamma_end = 0.99;
    double schedule_fraction = 0.8;
    std::size_t replay_capacity = 10000;
    std::size_t batch_size = 32;
    std::size_t target_sync_interval = 200;  // gradient steps
    double learning_rate = 0.001;
    std::uint64_t seed = 1;
    std::vector<std::string> worlds;  // builtin names or world file paths
    EnvConfig env;
    std::size_t checkpoint_interval = 100;  // episodes
    std::string checkpoint_dir;             // empty: no checkpoints written

    void validate() const;
};

/// (epsilon, gamma) for an episode: linear from the start values to the end
/// values over the first schedule_fraction of episodes, constant after.
std::pair<double, double> schedule(std::size_t episode, const TrainConfig& config);

struct EpisodeLog {
    std::size_t episode = 0;
    double total_reward = 0.0;
    double epsilon = 0.0;
    double gamma = 0.0;
    SimStatus status = SimStatus::running;
    std::size_t steps = 0;
    double wall_ms = 0.0;
};

struct TrainLog {
    std::vector<EpisodeLog> episodes;
};

/// Capacity-bounded ring buffer of transitions, oldest evicted first.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition transition);
    std::size_t size() const { return buffer_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return buffer_[i]; }

    /// Uniform sample of `count` distinct indices.
    std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> buffer_;
};

struct TrainResult {
    QNetwork network;
    AdamState adam;
    TrainLog log;
};

/// Resolves each entry as a builtin environment name, else a world file path.
std::vector<WorldSpec> resolve_worlds(const std::vector<std::string>& names);

/// The DQN training loop: random world per episode, epsilon-greedy rollout,
/// experience replay with a periodically synchronized target network, one
/// Adam step per environment step. Deterministic for a given config + seed.
TrainResult train(const TrainConfig& config);
TrainResult train(const TrainConfig& config, const std::vector<WorldSpec>& worlds);

/// Trailing mean over min(window, index + 1) entries.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

/// Flat key=value config text mirroring TrainConfig.
TrainConfig parse_train_config(const std::string& text);
TrainConfig parse_train_config_file(const std::string& path);
std::string format_train_config(const TrainConfig& config);

/// CSV: episode,total_reward,epsilon,gamma,status,steps
std::string train_log_csv(const TrainLog& log);
TrainLog parse_train_log_csv(const std::string& text);

}  // namespace primnav
