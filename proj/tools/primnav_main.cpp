// Command-line front end: train, eval, render-world, curves.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "primnav/checkpoint.hpp"
#include "primnav/depthcam.hpp"
#include "primnav/eval.hpp"
#include "primnav/trainer.hpp"
#include "primnav/world.hpp"

namespace {

using namespace primnav;

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// PRIMNAV_SEED overrides any config/flag seed.
std::uint64_t resolve_seed(std::uint64_t configured) {
    if (const char* env = std::getenv("PRIMNAV_SEED")) return std::stoull(env);
    return configured;
}

std::vector<WorldSpec> resolve_eval_worlds(const std::string& world_file,
                                           const std::string& builtin) {
    if (!world_file.empty()) return {load_world_file(world_file)};
    if (builtin == "all") return builtin_envs();
    return {builtin_env(builtin)};
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
    TrainConfig config = parse_train_config_file(config_path);
    config.seed = resolve_seed(config.seed);
    config.checkpoint_dir = out_dir;
    std::filesystem::create_directories(out_dir);

    std::cout << "resolved config:\n" << format_train_config(config);
    std::cout << "seed: " << config.seed << "\n";

    const std::vector<WorldSpec> worlds = resolve_worlds(config.worlds);
    std::filesystem::create_directories(out_dir + "/worlds");
    for (const WorldSpec& w : worlds)
        write_text_file(out_dir + "/worlds/" + w.name + ".world", save_world(w));

    const TrainResult result = train(config, worlds);
    write_text_file(out_dir + "/train_log.csv", train_log_csv(result.log));
    std::cout << "episodes: " << result.log.episodes.size() << "\n";
    std::cout << "log: " << out_dir << "/train_log.csv\n";
    std::cout << "final checkpoint: " << out_dir << "/final.ckpt\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& world_file,
             const std::string& builtin, std::size_t trials, const std::string& out_csv,
             std::uint64_t seed, double noise_sigma) {
    seed = resolve_seed(seed);
    EvalConfig config;
    config.base_seed = seed;
    config.env.noise_sigma = noise_sigma;
    config.env.noise_model = noise_sigma > 0.0 ? NoiseModel::gaussian : NoiseModel::none;

    QNetwork network = QNetwork::build(seed);
    if (!checkpoint_path.empty()) {
        network = read_checkpoint_file(checkpoint_path).network;
        std::cout << "checkpoint: " << checkpoint_path << "\n";
    } else {
        std::cout << "no checkpoint given; evaluating an untrained network\n";
    }
    std::cout << "seed: " << seed << "\ntrials: " << trials << "\nnoise_sigma: " << noise_sigma
              << "\n";

    std::vector<EpisodeResult> results;
    for (const WorldSpec& world : resolve_eval_worlds(world_file, builtin)) {
        auto rows = evaluate(network, world, trials, config);
        results.insert(results.end(), rows.begin(), rows.end());
    }
    write_text_file(out_csv, results_csv(results));

    for (const EnvSummary& s : summarize(results)) {
        std::printf("%-16s success %.0f%%  crash %.0f%%  mean time %5.1f s  mean reward %6.2f\n",
                    s.env.c_str(), 100.0 * s.success_rate, 100.0 * s.crash_rate, s.mean_time,
                    s.mean_reward);
    }
    std::printf("collision-free flights: %.0f%%\n", 100.0 * crash_free_fraction(results));
    std::cout << "results: " << out_csv << "\n";
    return 0;
}

int cmd_render_world(const std::string& world_file, const std::string& builtin,
                     const std::string& pose_str, const std::string& out_pgm) {
    std::istringstream iss(pose_str);
    Vec3 position;
    double yaw = 0.0;
    if (!(iss >> position.x >> position.y >> position.z >> yaw))
        throw std::runtime_error("bad --pose, expected \"x y z yaw\"");

    const WorldSpec world =
        world_file.empty() ? builtin_env(builtin) : load_world_file(world_file);
    std::cout << "world: " << world.name << "\npose: " << pose_str << "\n";
    write_text_file(out_pgm, to_pgm(render(world, position, yaw)));
    std::cout << "image: " << out_pgm << "\n";
    return 0;
}

int cmd_curves(const std::string& log_path, std::size_t window, const std::string& out_svg) {
    const TrainLog log = parse_train_log_csv(read_text_file(log_path));
    std::vector<double> rewards;
    rewards.reserve(log.episodes.size());
    for (const EpisodeLog& e : log.episodes) rewards.push_back(e.total_reward);
    std::cout << "episodes: " << rewards.size() << "\nwindow: " << window << "\n";
    write_text_file(out_svg, curves_svg(rewards, window));
    std::cout << "curve: " << out_svg << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"primnav: depth-camera quadrotor motion-primitive RL workbench"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    auto* train_cmd = app.add_subcommand("train", "Train a Q-network");
    train_cmd->add_option("--config", config_path, "key=value training config file")->required();
    train_cmd->add_option("--out", out_dir, "output directory")->required();

    std::string checkpoint_path, world_file, builtin = "all", out_csv;
    std::size_t trials = 5;
    std::uint64_t eval_seed = 0;
    double noise_sigma = 0.02;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint over environments");
    eval_cmd->add_option("--checkpoint", checkpoint_path, "checkpoint file");
    auto* wopt = eval_cmd->add_option("--world", world_file, "world file");
    eval_cmd->add_option("--builtin", builtin, "builtin environment name, or 'all'")
        ->excludes(wopt);
    eval_cmd->add_option("--trials", trials, "trials per environment");
    eval_cmd->add_option("--out", out_csv, "output CSV path")->required();
    eval_cmd->add_option("--seed", eval_seed, "base seed");
    eval_cmd->add_option("--noise-sigma", noise_sigma, "depth noise sigma (0 disables)");

    std::string pose_str = "0 0 0 0", out_pgm;
    std::string rw_world, rw_builtin;
    auto* render_cmd = app.add_subcommand("render-world", "Render a depth image as PGM");
    auto* rwopt = render_cmd->add_option("--world", rw_world, "world file");
    render_cmd->add_option("--builtin", rw_builtin, "builtin environment name")->excludes(rwopt);
    render_cmd->add_option("--pose", pose_str, "camera pose \"x y z yaw\"");
    render_cmd->add_option("--out", out_pgm, "output PGM path")->required();

    std::string log_path, out_svg;
    std::size_t window = 20;
    auto* curves_cmd = app.add_subcommand("curves", "Export a reward curve as SVG");
    curves_cmd->add_option("--log", log_path, "training log CSV")->required();
    curves_cmd->add_option("--window", window, "moving-average window");
    curves_cmd->add_option("--out", out_svg, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(train_cmd)) return cmd_train(config_path, out_dir);
        if (app.got_subcommand(eval_cmd))
            return cmd_eval(checkpoint_path, world_file, builtin, trials, out_csv, eval_seed,
                            noise_sigma);
        if (app.got_subcommand(render_cmd)) {
            if (rw_world.empty() && rw_builtin.empty())
                throw std::runtime_error("render-world: need --world or --builtin");
            return cmd_render_world(rw_world, rw_builtin, pose_str, out_pgm);
        }
        if (app.got_subcommand(curves_cmd)) return cmd_curves(log_path, window, out_svg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
