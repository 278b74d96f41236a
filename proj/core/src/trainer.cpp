#include "primnav/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace primnav {

void TrainConfig::validate() const {
    if (total_episodes < 1) throw std::invalid_argument("train: total_episodes must be >= 1");
    if (!(schedule_fraction > 0.0 && schedule_fraction <= 1.0))
        throw std::invalid_argument("train: schedule_fraction must be in (0, 1]");
    if (batch_size > replay_capacity)
        throw std::invalid_argument("train: batch_size must be <= replay_capacity");
    if (worlds.empty()) throw std::invalid_argument("train: at least one world is required");
}

std::pair<double, double> schedule(std::size_t episode, const TrainConfig& config) {
    if (episode >= config.total_episodes)
        throw std::invalid_argument("schedule: episode out of range");
    const double anneal_span =
        config.schedule_fraction * static_cast<double>(config.total_episodes);
    const double t = static_cast<double>(episode) / anneal_span;
    if (t >= 1.0) return {config.epsilon_end, config.gamma_end};
    return {config.epsilon_start + (config.epsilon_end - config.epsilon_start) * t,
            config.gamma_start + (config.gamma_end - config.gamma_start) * t};
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be > 0");
    buffer_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition transition) {
    if (buffer_.size() < capacity_) {
        buffer_.push_back(std::move(transition));
    } else {
        buffer_[next_] = std::move(transition);
    }
    next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, Rng& rng) const {
    if (count > buffer_.size())
        throw std::invalid_argument("replay sample: not enough transitions");
    std::vector<std::size_t> chosen;
    chosen.reserve(count);
    while (chosen.size() < count) {
        const std::size_t idx = rng.uniform_index(buffer_.size());
        if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) chosen.push_back(idx);
    }
    return chosen;
}

std::vector<WorldSpec> resolve_worlds(const std::vector<std::string>& names) {
    const auto builtins = builtin_env_names();
    std::vector<WorldSpec> worlds;
    for (const std::string& name : names) {
        if (std::find(builtins.begin(), builtins.end(), name) != builtins.end())
            worlds.push_back(builtin_env(name));
        else
            worlds.push_back(load_world_file(name));
    }
    return worlds;
}

namespace {

void write_checkpoint_if_configured(const TrainConfig& config, const QNetwork& net,
                                    const AdamState& adam, std::size_t episode,
                                    const std::string& tag) {
    if (config.checkpoint_dir.empty()) return;
    std::filesystem::create_directories(config.checkpoint_dir);
    const std::string path = config.checkpoint_dir + "/" + tag + ".ckpt";
    write_checkpoint_file(path, net, &adam,
                          {{"episode", std::to_string(episode)},
                           {"seed", std::to_string(config.seed)}});
}

}  // namespace

TrainResult train(const TrainConfig& config) { return train(config, resolve_worlds(config.worlds)); }

TrainResult train(const TrainConfig& config, const std::vector<WorldSpec>& worlds) {
    config.validate();
    if (worlds.empty()) throw std::invalid_argument("train: empty world list");

    EnvConfig env = config.env;
    env.max_steps = config.max_steps_per_episode;

    QNetwork net = QNetwork::build(derive_seed(config.seed, 1));
    QNetwork target = net;
    AdamState adam = AdamState::make(net.parameter_count(), config.learning_rate);
    ReplayBuffer replay(config.replay_capacity);

    Rng action_rng(derive_seed(config.seed, 2));
    Rng world_rng(derive_seed(config.seed, 3));
    Rng replay_rng(derive_seed(config.seed, 4));
    Rng noise_rng(derive_seed(config.seed, 5));

    std::vector<Tensor> grads = net.zero_grads();
    QNetwork::Cache cache;
    std::size_t gradient_steps = 0;

    auto train_step = [&](double gamma) {
        const auto batch = replay.sample_indices(config.batch_size, replay_rng);
        for (Tensor& g : grads) g.fill(0.0);
        for (std::size_t idx : batch) {
            const Transition& tr = replay.at(idx);
            QValues next_q{};
            if (!tr.terminal)
                next_q = target.forward(tr.next_observation.depth,
                                        tr.next_observation.relative_position);
            const double y = td_target(tr.reward, next_q, gamma, tr.terminal);
            const QValues q = net.forward(tr.observation.depth,
                                          tr.observation.relative_position, cache);
            const HuberResult h = huber_loss(q[tr.action], y);
            QValues d_q{};
            d_q[tr.action] = h.grad / static_cast<double>(config.batch_size);
            net.backward(cache, d_q, grads);
        }
        adam_step(net.params(), grads, adam);
        gradient_steps += 1;
        if (gradient_steps % config.target_sync_interval == 0) target = net;
    };

    TrainLog train_log;
    for (std::size_t episode = 0; episode < config.total_episodes; ++episode) {
        const auto [epsilon, gamma] = schedule(episode, config);
        const WorldSpec& world = worlds[world_rng.uniform_index(worlds.size())];

        const auto t0 = std::chrono::steady_clock::now();
        auto [state, obs] = reset(world, env, &noise_rng);
        try {
            while (state.status == SimStatus::running) {
                const QValues q = net.forward(obs.depth, obs.relative_position);
                const std::size_t action = select_action(q, epsilon, action_rng);
                StepResult sr = step(state, action, world, env, &noise_rng);
                replay.push(Transition{std::move(obs), action, sr.reward, sr.observation,
                                       sr.terminal});
                obs = std::move(sr.observation);
                if (replay.size() >= config.batch_size) train_step(gamma);
            }
        } catch (const std::runtime_error&) {
            write_checkpoint_if_configured(config, net, adam, episode, "diagnostic");
            throw;
        }
        const auto t1 = std::chrono::steady_clock::now();

        EpisodeLog log;
        log.episode = episode;
        log.total_reward = state.cumulative_reward;
        log.epsilon = epsilon;
        log.gamma = gamma;
        log.status = state.status;
        log.steps = state.step_index;
        log.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        train_log.episodes.push_back(log);

        if (config.checkpoint_interval > 0 && (episode + 1) % config.checkpoint_interval == 0)
            write_checkpoint_if_configured(config, net, adam, episode + 1,
                                           "episode_" + std::to_string(episode + 1));
    }
    write_checkpoint_if_configured(config, net, adam, config.total_episodes, "final");
    return TrainResult{std::move(net), std::move(adam), std::move(train_log)};
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    std::vector<double> out(values.size());
    double running = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        running += values[i];
        if (i >= window) running -= values[i - window];
        out[i] = running / static_cast<double>(std::min(window, i + 1));
    }
    return out;
}

TrainConfig parse_train_config(const std::string& text) {
    TrainConfig config;
    std::istringstream input(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::runtime_error("config parse error at line " + std::to_string(line_no) +
                                         ": expected key=value");
            continue;
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "total_episodes") config.total_episodes = std::stoull(value);
            else if (key == "max_steps_per_episode") config.max_steps_per_episode = std::stoull(value);
            else if (key == "epsilon_start") config.epsilon_start = std::stod(value);
            else if (key == "epsilon_end") config.epsilon_end = std::stod(value);
            else if (key == "gamma_start") config.gamma_start = std::stod(value);
            else if (key == "gamma_end") config.gamma_end = std::stod(value);
            else if (key == "schedule_fraction") config.schedule_fraction = std::stod(value);
            else if (key == "replay_capacity") config.replay_capacity = std::stoull(value);
            else if (key == "batch_size") config.batch_size = std::stoull(value);
            else if (key == "target_sync_interval") config.target_sync_interval = std::stoull(value);
            else if (key == "learning_rate") config.learning_rate = std::stod(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "checkpoint_interval") config.checkpoint_interval = std::stoull(value);
            else if (key == "noise_sigma") {
                config.env.noise_sigma = std::stod(value);
                config.env.noise_model =
                    config.env.noise_sigma > 0.0 ? NoiseModel::gaussian : NoiseModel::none;
            } else if (key == "primitive_scale") {
                config.env.actions = action_set(std::stod(value));
            } else if (key == "worlds") {
                config.worlds.clear();
                std::istringstream ws(value);
                std::string w;
                while (std::getline(ws, w, ',')) {
                    w = trim(w);
                    if (!w.empty()) config.worlds.push_back(w);
                }
            } else {
                throw std::runtime_error("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config parse error at line " + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
    return config;
}

TrainConfig parse_train_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_train_config(ss.str());
}

std::string format_train_config(const TrainConfig& config) {
    std::ostringstream oss;
    oss << "total_episodes=" << config.total_episodes << "\n"
        << "max_steps_per_episode=" << config.max_steps_per_episode << "\n"
        << "epsilon_start=" << config.epsilon_start << "\n"
        << "epsilon_end=" << config.epsilon_end << "\n"
        << "gamma_start=" << config.gamma_start << "\n"
        << "gamma_end=" << config.gamma_end << "\n"
        << "schedule_fraction=" << config.schedule_fraction << "\n"
        << "replay_capacity=" << config.replay_capacity << "\n"
        << "batch_size=" << config.batch_size << "\n"
        << "target_sync_interval=" << config.target_sync_interval << "\n"
        << "learning_rate=" << config.learning_rate << "\n"
        << "seed=" << config.seed << "\n"
        << "checkpoint_interval=" << config.checkpoint_interval << "\n"
        << "noise_sigma=" << config.env.noise_sigma << "\n";
    oss << "worlds=";
    for (std::size_t i = 0; i < config.worlds.size(); ++i)
        oss << (i ? "," : "") << config.worlds[i];
    oss << "\n";
    return oss.str();
}

std::string train_log_csv(const TrainLog& log) {
    std::ostringstream oss;
    oss << "episode,total_reward,epsilon,gamma,status,steps\n";
    for (const EpisodeLog& e : log.episodes) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%s,%zu\n", e.episode,
                      e.total_reward, e.epsilon, e.gamma, to_string(e.status), e.steps);
        oss << buf;
    }
    return oss.str();
}

TrainLog parse_train_log_csv(const std::string& text) {
    TrainLog log;
    std::istringstream input(text);
    std::string line;
    if (!std::getline(input, line)) throw std::runtime_error("train log: empty file");
    while (std::getline(input, line)) {
        if (line.empty()) continue;
        std::istringstream iss(line);
        EpisodeLog e;
        std::string field;
        auto next = [&](const char* what) {
            if (!std::getline(iss, field, ','))
                throw std::runtime_error(std::string("train log: missing field ") + what);
            return field;
        };
        e.episode = std::stoull(next("episode"));
        e.total_reward = std::stod(next("total_reward"));
        e.epsilon = std::stod(next("epsilon"));
        e.gamma = std::stod(next("gamma"));
        e.status = sim_status_from_string(next("status"));
        e.steps = std::stoull(next("steps"));
        log.episodes.push_back(e);
    }
    return log;
}

}  // namespace primnav
