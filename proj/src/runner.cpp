#include "polyrl/runner.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "polyrl/chain.hpp"
#include "polyrl/csv.hpp"
#include "polyrl/envs.hpp"
#include "polyrl/learner.hpp"
#include "polyrl/log.hpp"
#include "polyrl/policy.hpp"
#include "polyrl/rng.hpp"
#include "polyrl/svg.hpp"

namespace polyrl {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct StepOut {
  Vec obs;
  double reward;
  bool done;
};

// Uniform seam over the navigation and point-mass tasks for the run loop.
class Env {
 public:
  virtual ~Env() = default;
  virtual Vec reset(Rng& rng) = 0;
  virtual StepOut step(const Vec& action) = 0;
  virtual ActionSpace action_space() const = 0;
  virtual void state_bounds(Vec& low, Vec& high) const = 0;
  virtual int max_steps() const = 0;
  virtual bool goal_reached() const = 0;
  // Coverage-grid frame: origin offset plus box extents.
  virtual Point2 coverage_origin() const = 0;
  virtual double coverage_width() const = 0;
  virtual double coverage_height() const = 0;
  virtual Point2 position2d() const = 0;
};

class NavEnv : public Env {
 public:
  explicit NavEnv(NavSpec spec) : spec_(std::move(spec)) {}

  Vec reset(Rng& rng) override {
    state_ = nav_reset(spec_, rng);
    goal_ = false;
    return to_obs(state_.position);
  }
  StepOut step(const Vec& action) override {
    NavStepResult r = nav_step(spec_, state_, action);
    state_ = r.state;
    if (r.reached_goal) goal_ = true;
    return {to_obs(state_.position), r.reward, r.done};
  }
  ActionSpace action_space() const override {
    return ActionSpace::symmetric(2, spec_.max_step_length);
  }
  void state_bounds(Vec& low, Vec& high) const override {
    low = Vec::Zero(2);
    high = Vec(2);
    high << spec_.width, spec_.height;
  }
  int max_steps() const override { return spec_.max_episode_steps; }
  bool goal_reached() const override { return goal_; }
  Point2 coverage_origin() const override { return {0.0, 0.0}; }
  double coverage_width() const override { return spec_.width; }
  double coverage_height() const override { return spec_.height; }
  Point2 position2d() const override { return state_.position; }

 private:
  static Vec to_obs(const Point2& p) {
    Vec v(2);
    v << p.x(), p.y();
    return v;
  }
  NavSpec spec_;
  NavState state_;
  bool goal_ = false;
};

class PointMassEnv : public Env {
 public:
  explicit PointMassEnv(SparsePointMassSpec spec) : spec_(std::move(spec)) {}

  Vec reset(Rng&) override {
    state_ = pointmass_reset(spec_);
    return state_.position;
  }
  StepOut step(const Vec& action) override {
    PointMassStepResult r = pointmass_step(spec_, state_, action);
    state_ = r.state;
    return {state_.position, r.reward, r.done};
  }
  ActionSpace action_space() const override {
    return ActionSpace::symmetric(spec_.dim, spec_.action_magnitude);
  }
  void state_bounds(Vec& low, Vec& high) const override {
    const double half = 1.5 * spec_.lambda;
    low = Vec::Constant(spec_.dim, -half);
    high = Vec::Constant(spec_.dim, half);
  }
  int max_steps() const override { return spec_.max_episode_steps; }
  bool goal_reached() const override { return state_.reward_granted; }
  Point2 coverage_origin() const override {
    return {-1.5 * spec_.lambda, -1.5 * spec_.lambda};
  }
  double coverage_width() const override { return 3.0 * spec_.lambda; }
  double coverage_height() const override { return 3.0 * spec_.lambda; }
  Point2 position2d() const override { return {state_.position[0], state_.position[1]}; }

 private:
  SparsePointMassSpec spec_;
  PointMassState state_;
};

std::unique_ptr<Env> make_env(const ExperimentConfig& cfg) {
  if (cfg.env_kind == EnvKind::Nav) return std::make_unique<NavEnv>(cfg.nav);
  return std::make_unique<PointMassEnv>(cfg.pointmass);
}

std::unique_ptr<LinearQ> make_learner(const ExperimentConfig& cfg, const Env& env) {
  Vec low, high;
  env.state_bounds(low, high);
  if (low.size() != 2) return nullptr;  // learner features are 2D
  TileCoder coder(cfg.learner.tilings, cfg.learner.tiles_per_dim, low, high,
                  cfg.learner.num_directions);
  const double scale = cfg.env_kind == EnvKind::Nav ? cfg.nav.max_step_length
                                                    : cfg.pointmass.max_step_length;
  return std::make_unique<LinearQ>(std::move(coder), cfg.learner.alpha,
                                   cfg.learner.gamma, scale);
}

double epsilon_for_episode(const LearnerConfig& lc, int episode, int episodes) {
  if (episodes <= 1 || lc.epsilon == lc.epsilon_final) return lc.epsilon;
  const double t = static_cast<double>(episode) / (episodes - 1);
  return lc.epsilon + (lc.epsilon_final - lc.epsilon) * t;
}

double evaluate_greedy(Env& env, const LinearQ& q, Rng& rng, int episodes,
                       std::vector<int>* steps_out = nullptr) {
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Vec obs = env.reset(rng);
    double ep_return = 0.0;
    int steps = 0;
    for (int t = 0; t < env.max_steps(); ++t) {
      const StepOut out = env.step(q.greedy_action(obs));
      ep_return += out.reward;
      obs = out.obs;
      ++steps;
      if (out.done) break;
    }
    total += ep_return;
    if (steps_out) steps_out->push_back(steps);
  }
  return total / episodes;
}

const std::vector<std::string> kMetricsHeader = {
    "seed",     "episode",  "train_return", "eval_return",
    "steps_to_goal", "coverage", "greedy_frac",  "segments"};

struct SeedOutputs {
  CsvBuilder trajectory{{"episode", "step", "x", "y", "reward", "done"}};
  CsvBuilder decisions{{"step", "branch", "delta_ug2", "lb", "ub", "mode"}};
  long decision_step = 0;
};

SeedResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                    CsvBuilder& metrics, SeedOutputs* extra) {
  SeedResult result;
  result.seed = seed;

  auto env = make_env(cfg);
  auto eval_env = make_env(cfg);
  const ActionSpace space = env->action_space();

  Rng env_rng = make_rng(seed, "env");
  Rng policy_rng = make_rng(seed, "policy");
  Rng init_rng = make_rng(seed, "init");
  Rng eval_rng = make_rng(seed, "eval");

  std::unique_ptr<LinearQ> q = make_learner(cfg, *env);
  std::unique_ptr<PolyRLPolicy> poly;
  if (cfg.method == Method::PolyRL)
    poly = std::make_unique<PolyRLPolicy>(cfg.polyrl, space, policy_rng);

  CoverageGrid grid(env->coverage_width(), env->coverage_height(),
                    cfg.coverage_cell_size);
  const Point2 origin = env->coverage_origin();

  const TargetPolicy target = [&](const Vec& s) -> Vec {
    if (!q) throw std::logic_error("PolyRL requires a learner-backed target policy");
    return q->greedy_action(s);
  };

  for (int episode = 0; episode < cfg.episodes; ++episode) {
    Vec obs = env->reset(env_rng);
    grid.visit(Point2(env->position2d() - origin));

    long greedy_steps = 0;
    long segments = 0;
    if (poly) {
      Vec a0 = cfg.a0_from_target && q ? q->greedy_action(obs) : space.uniform_point(init_rng);
      poly->begin_episode(episode, obs, a0);
    }
    const double epsilon = epsilon_for_episode(cfg.learner, episode, cfg.episodes);

    double train_return = 0.0;
    int steps = 0;
    int steps_to_goal = env->max_steps();
    bool goal_seen = false;

    try {
      for (int t = 0; t < env->max_steps(); ++t) {
        Vec action;
        int a_idx = -1;
        if (cfg.method == Method::PolyRL) {
          auto [act, dec] = poly->next_action(obs, target);
          action = std::move(act);
          if (extra && cfg.write_decisions) {
            extra->decisions.field(extra->decision_step++);
            extra->decisions.field(std::string(branch_name(dec.branch)));
            extra->decisions.field(dec.delta_ug2);
            extra->decisions.field(dec.lb);
            extra->decisions.field(dec.ub);
            extra->decisions.field(std::string(
                dec.mode_after == Mode::Exploring ? "exploring" : "exploiting"));
            extra->decisions.end_row();
          }
          if (q) a_idx = q->nearest_index(action);
        } else if (cfg.method == Method::EpsilonGreedy) {
          const LinearQ::Choice choice = q->epsilon_greedy(obs, epsilon, policy_rng);
          action = choice.action;
          a_idx = choice.index;
          if (choice.greedy) ++greedy_steps;
        } else {
          action = space.uniform_point(policy_rng);
          if (q) a_idx = q->nearest_index(action);
        }

        const StepOut out = env->step(action);
        train_return += out.reward;
        ++steps;

        if (q && a_idx >= 0) q->td_update(obs, a_idx, out.reward, out.obs, out.done);
        if (poly && poly->mode() == Mode::Exploring && !out.done)
          poly->observe_transition(out.obs);

        grid.visit(Point2(env->position2d() - origin));
        if (extra && cfg.write_trajectories) {
          const Point2 p = env->position2d();
          extra->trajectory.field(episode);
          extra->trajectory.field(t);
          extra->trajectory.field(p.x());
          extra->trajectory.field(p.y());
          extra->trajectory.field(out.reward);
          extra->trajectory.field(static_cast<long>(out.done ? 1 : 0));
          extra->trajectory.end_row();
        }

        obs = out.obs;
        if (env->goal_reached() && !goal_seen) {
          goal_seen = true;
          steps_to_goal = steps;
        }
        if (out.done) break;
      }
    } catch (const LearnerDivergence& e) {
      result.failed = true;
      result.failure_episode = episode;
      result.failure_reason = e.what();
      log(LogLevel::Error, "seed %llu diverged in episode %d: %s",
          static_cast<unsigned long long>(seed), episode, e.what());
    }

    if (poly) {
      greedy_steps = poly->counters().greedy_steps;
      segments = poly->counters().segments;
    }

    if (!result.failed && (episode + 1) % cfg.eval_interval == 0) {
      double eval_return = kNaN;
      if (q) eval_return = evaluate_greedy(*eval_env, *q, eval_rng, cfg.eval_episodes);
      MetricsRow row;
      row.seed = seed;
      row.episode = episode;
      row.train_return = train_return;
      row.eval_return = eval_return;
      row.steps_to_goal = steps_to_goal;
      row.coverage = grid.fraction();
      row.greedy_frac = steps > 0 ? static_cast<double>(greedy_steps) / steps : 0.0;
      row.segments = segments;
      result.rows.push_back(row);

      metrics.field(static_cast<long>(seed));
      metrics.field(row.episode);
      metrics.field(row.train_return);
      metrics.field(row.eval_return);
      metrics.field(row.steps_to_goal);
      metrics.field(row.coverage);
      metrics.field(row.greedy_frac);
      metrics.field(row.segments);
      metrics.end_row();
    }
    if (result.failed) break;
  }

  if (q) {
    const auto path =
        cfg.output_dir / ("weights_seed" + std::to_string(seed) + ".csv");
    save_weights_csv(path, q->weights());
  }
  return result;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);

  ExperimentResult result;
  CsvBuilder metrics(kMetricsHeader);
  CsvBuilder failures({"seed", "episode", "reason"});
  bool any_failure = false;

  for (std::uint64_t seed : cfg.seeds) {
    SeedOutputs extra;
    const bool want_extra = cfg.write_trajectories || cfg.write_decisions;
    SeedResult seed_result =
        run_seed(cfg, seed, metrics, want_extra ? &extra : nullptr);
    if (seed_result.failed) {
      any_failure = true;
      failures.field(static_cast<long>(seed));
      failures.field(seed_result.failure_episode);
      failures.field(seed_result.failure_reason);
      failures.end_row();
    }
    if (cfg.write_trajectories)
      write_file_atomic(
          cfg.output_dir / ("trajectory_seed" + std::to_string(seed) + ".csv"),
          extra.trajectory.str());
    if (cfg.write_decisions)
      write_file_atomic(
          cfg.output_dir / ("decisions_seed" + std::to_string(seed) + ".csv"),
          extra.decisions.str());
    result.seeds.push_back(std::move(seed_result));
  }

  result.metrics_path = cfg.output_dir / "metrics.csv";
  write_file_atomic(result.metrics_path, metrics.str());
  if (any_failure) write_file_atomic(cfg.output_dir / "failures.csv", failures.str());
  return result;
}

void run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<double> thetas =
      cfg.sweep_theta.empty() ? std::vector<double>{cfg.polyrl.theta} : cfg.sweep_theta;
  const std::vector<double> sigmas = cfg.sweep_sigma_sq.empty()
                                         ? std::vector<double>{cfg.polyrl.sigma_sq}
                                         : cfg.sweep_sigma_sq;
  const std::vector<double> betas =
      cfg.sweep_beta.empty() ? std::vector<double>{cfg.polyrl.beta} : cfg.sweep_beta;

  CsvBuilder agg({"theta", "sigma_sq", "beta", "n_seeds", "n_failed",
                  "mean_final_eval", "se_final_eval", "mean_final_coverage",
                  "se_final_coverage"});

  int point = 0;
  for (double theta : thetas)
    for (double sigma_sq : sigmas)
      for (double beta : betas) {
        ExperimentConfig sub = cfg;
        sub.polyrl.theta = theta;
        sub.polyrl.sigma_sq = sigma_sq;
        sub.polyrl.beta = beta;
        sub.output_dir = cfg.output_dir / ("point" + std::to_string(point));
        ++point;

        ExperimentResult res = run_experiment(sub);
        double eval_sum = 0.0, eval_sq = 0.0, cov_sum = 0.0, cov_sq = 0.0;
        long ok = 0, failed = 0;
        for (const SeedResult& sr : res.seeds) {
          if (sr.failed || sr.rows.empty()) {
            ++failed;
            continue;
          }
          const MetricsRow& last = sr.rows.back();
          const double ev = std::isnan(last.eval_return) ? 0.0 : last.eval_return;
          eval_sum += ev;
          eval_sq += ev * ev;
          cov_sum += last.coverage;
          cov_sq += last.coverage * last.coverage;
          ++ok;
        }
        auto se = [](double sum, double sq, long n) {
          if (n < 2) return 0.0;
          const double mean = sum / n;
          const double var = std::max(0.0, sq / n - mean * mean) * n / (n - 1);
          return std::sqrt(var / n);
        };
        agg.field(theta);
        agg.field(sigma_sq);
        agg.field(beta);
        agg.field(ok);
        agg.field(failed);
        agg.field(ok > 0 ? eval_sum / ok : kNaN);
        agg.field(se(eval_sum, eval_sq, ok));
        agg.field(ok > 0 ? cov_sum / ok : kNaN);
        agg.field(se(cov_sum, cov_sq, ok));
        agg.end_row();
      }

  write_file_atomic(cfg.output_dir / "sweep.csv", agg.str());
}

void run_chain_stats(const ChainStatsParams& params,
                     const std::filesystem::path& out_file) {
  if (params.model != "fjc" && params.model != "frc")
    throw ConfigError("chain-stats model must be 'fjc' or 'frc'");
  if (params.n_chains < 1) throw ConfigError("chain-stats needs n_chains >= 1");

  const bool frc = params.model == "frc";
  double lp = 0.0;
  if (frc) lp = persistence_number(params.theta);

  int max_lag = params.max_lag;
  if (max_lag < 0) {
    max_lag = frc ? static_cast<int>(std::ceil(3.0 * lp)) : 10;
    max_lag = std::min(max_lag, params.n_bonds - 1);
  }
  if (max_lag >= params.n_bonds)
    throw ConfigError("chain-stats max_lag must be < n_bonds");

  EnsembleAccumulator acc(max_lag);
  for (long c = 0; c < params.n_chains; ++c) {
    Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(c)));
    acc.add(frc ? generate_frc(params.dim, params.n_bonds, params.b0, params.theta, rng)
                : generate_fjc(params.dim, params.n_bonds, params.b0, rng));
  }
  const EnsembleStats st = acc.finish();

  const double b0_sq = params.b0 * params.b0;
  const double cos_theta = std::cos(params.theta);
  CsvBuilder csv({"metric", "k", "value", "stderr", "reference"});
  for (int k = 0; k <= max_lag; ++k) {
    csv.field(std::string("corr"));
    csv.field(static_cast<long>(k));
    csv.field(st.corr[k]);
    csv.field(st.corr_se[k]);
    csv.field(frc ? std::pow(cos_theta, k) : (k == 0 ? 1.0 : 0.0));
    csv.end_row();
  }
  auto scalar = [&](const char* name, double value, double se, double ref) {
    csv.field(std::string(name));
    csv.field(std::string(""));
    csv.field(value);
    csv.field(se);
    csv.field(ref);
    csv.end_row();
  };
  const double e2e_ref =
      frc ? params.n_bonds * effective_bond_length_sq(params.theta, params.b0)
          : params.n_bonds * b0_sq;
  scalar("mean_bond_sq", st.mean_bond_sq, 0.0, b0_sq);
  scalar("end_to_end_sq", st.mean_end_to_end_sq, st.end_to_end_sq_se, e2e_ref);
  scalar("end_to_end", st.mean_end_to_end, st.end_to_end_se, kNaN);
  scalar("gyration_sq", st.mean_gyration_sq, st.gyration_sq_se, kNaN);
  scalar("gyration", st.mean_gyration, st.gyration_se, kNaN);
  if (frc) {
    const double denom = params.n_bonds * b0_sq;
    scalar("expansion_ratio", st.mean_end_to_end_sq / denom,
           st.end_to_end_sq_se / denom, expansion_ratio(lp));
  }
  write_file_atomic(out_file, csv.str());
}

void save_weights_csv(const std::filesystem::path& path, const std::vector<double>& w) {
  CsvBuilder csv({"index", "weight"});
  for (size_t i = 0; i < w.size(); ++i) {
    csv.field(static_cast<long>(i));
    csv.field(w[i]);
    csv.end_row();
  }
  write_file_atomic(path, csv.str());
}

std::vector<double> load_weights_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "index")
    throw IoError("weights CSV: missing header in " + path.string());
  std::vector<double> w;
  w.reserve(rows.size() - 1);
  for (size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 2) throw IoError("weights CSV: malformed row");
    w.push_back(parse_double_field(rows[r][1]));
  }
  return w;
}

double run_eval(const ExperimentConfig& cfg, const std::filesystem::path& weights_path,
                int episodes, std::uint64_t seed, const std::filesystem::path& out_file) {
  if (episodes < 1) throw ConfigError("eval needs episodes >= 1");
  auto env = make_env(cfg);
  std::unique_ptr<LinearQ> q = make_learner(cfg, *env);
  if (!q) throw ConfigError("eval requires a 2D state space");
  q->set_weights(load_weights_csv(weights_path));

  Rng eval_rng = make_rng(seed, "eval");
  CsvBuilder csv({"episode", "return", "steps"});
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    std::vector<int> steps;
    const double ret = evaluate_greedy(*env, *q, eval_rng, 1, &steps);
    total += ret;
    csv.field(e);
    csv.field(ret);
    csv.field(static_cast<long>(steps.empty() ? 0 : steps[0]));
    csv.end_row();
  }
  if (!out_file.empty()) write_file_atomic(out_file, csv.str());
  return total / episodes;
}

}  // namespace polyrl
