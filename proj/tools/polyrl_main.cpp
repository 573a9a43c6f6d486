#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "polyrl/config.hpp"
#include "polyrl/csv.hpp"
#include "polyrl/runner.hpp"
#include "polyrl/svg.hpp"

namespace {

using namespace polyrl;

struct CommonOpts {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::string out_dir;
  int episodes = -1;
  std::string method;
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "experiment config (JSON)")->required();
  cmd->add_option("--seed", opts.seeds, "seed (repeatable; overrides config)");
  cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
  cmd->add_option("--episodes", opts.episodes, "episode budget (overrides config)");
  cmd->add_option("--method", opts.method,
                  "exploration method: polyrl | epsilon-greedy | uniform");
}

ExperimentConfig build_config(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts.config_path);
  if (!opts.seeds.empty()) cfg.seeds = opts.seeds;
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.episodes > 0) cfg.episodes = opts.episodes;
  if (!opts.method.empty()) cfg.method = parse_method(opts.method);
  if (opts.svg) cfg.write_trajectories = true;
  cfg.validate();
  return cfg;
}

void maybe_render(const ExperimentConfig& cfg) {
  if (cfg.env_kind != EnvKind::Nav) return;
  for (std::uint64_t seed : cfg.seeds) {
    const auto traj_path =
        cfg.output_dir / ("trajectory_seed" + std::to_string(seed) + ".csv");
    const auto traj = read_trajectory_csv(traj_path);
    write_file_atomic(
        cfg.output_dir / ("trajectory_seed" + std::to_string(seed) + ".svg"),
        render_svg(traj, cfg.nav, cfg.coverage_cell_size));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PolyRL persistent-exploration laboratory"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  auto* run_cmd = app.add_subcommand("run", "run a seeded experiment");
  add_common(run_cmd, run_opts);
  run_cmd->add_flag("--svg", run_opts.svg, "also write trajectory CSVs and SVGs");

  CommonOpts sweep_opts;
  auto* sweep_cmd = app.add_subcommand("sweep", "grid sweep over theta/sigma^2/beta");
  add_common(sweep_cmd, sweep_opts);

  ChainStatsParams cs;
  std::string cs_out = "chain_stats.csv";
  auto* cs_cmd = app.add_subcommand("chain-stats", "chain-statistics campaign");
  cs_cmd->add_option("--model", cs.model, "fjc | frc")->required();
  cs_cmd->add_option("--dim", cs.dim, "space dimension");
  cs_cmd->add_option("--bonds", cs.n_bonds, "bonds per chain");
  cs_cmd->add_option("--b0", cs.b0, "bond length");
  cs_cmd->add_option("--theta", cs.theta, "correlation angle (frc)");
  cs_cmd->add_option("--chains", cs.n_chains, "ensemble size");
  cs_cmd->add_option("--seed", cs.seed, "master seed");
  cs_cmd->add_option("--max-lag", cs.max_lag, "correlation lag cap (-1 = auto)");
  cs_cmd->add_option("--out", cs_out, "output CSV path");

  std::string render_traj, render_config, render_out;
  double render_cells = 0.0;
  auto* render_cmd = app.add_subcommand("render", "render a trajectory CSV to SVG");
  render_cmd->add_option("--traj", render_traj, "trajectory CSV")->required();
  render_cmd->add_option("--config", render_config, "experiment config (JSON)")->required();
  render_cmd->add_option("--out", render_out, "output SVG path")->required();
  render_cmd->add_option("--cells", render_cells, "shade visited cells of this size");

  CommonOpts eval_opts;
  std::string eval_weights, eval_out = "eval.csv";
  int eval_episodes = 5;
  std::uint64_t eval_seed = 1;
  auto* eval_cmd = app.add_subcommand("eval", "greedy rollouts from saved weights");
  eval_cmd->add_option("--config", eval_opts.config_path, "experiment config (JSON)")
      ->required();
  eval_cmd->add_option("--weights", eval_weights, "weights CSV")->required();
  eval_cmd->add_option("--episodes", eval_episodes, "rollout count");
  eval_cmd->add_option("--seed", eval_seed, "evaluation seed");
  eval_cmd->add_option("--out", eval_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ExperimentConfig cfg = build_config(run_opts);
      const ExperimentResult res = run_experiment(cfg);
      if (run_opts.svg) maybe_render(cfg);
      std::printf("wrote %s\n", res.metrics_path.string().c_str());
    } else if (*sweep_cmd) {
      const ExperimentConfig cfg = build_config(sweep_opts);
      run_sweep(cfg);
      std::printf("wrote %s\n", (cfg.output_dir / "sweep.csv").string().c_str());
    } else if (*cs_cmd) {
      run_chain_stats(cs, cs_out);
      std::printf("wrote %s\n", cs_out.c_str());
    } else if (*render_cmd) {
      const ExperimentConfig cfg = load_config(render_config);
      if (cfg.env_kind != EnvKind::Nav)
        throw ConfigError("render requires a navigation environment");
      const auto traj = read_trajectory_csv(render_traj);
      write_file_atomic(render_out, render_svg(traj, cfg.nav, render_cells));
      std::printf("wrote %s\n", render_out.c_str());
    } else if (*eval_cmd) {
      const ExperimentConfig cfg = load_config(eval_opts.config_path);
      const double mean = run_eval(cfg, eval_weights, eval_episodes, eval_seed, eval_out);
      std::printf("mean_return=%s over %d episodes; wrote %s\n",
                  format_double(mean).c_str(), eval_episodes, eval_out.c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
