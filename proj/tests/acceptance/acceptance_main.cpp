// End-to-end acceptance suite. Each criterion prints a single PASS/FAIL
// line with the measured quantities; the process exit code is the number
// of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "polyrl/bounds.hpp"
#include "polyrl/chain.hpp"
#include "polyrl/config.hpp"
#include "polyrl/csv.hpp"
#include "polyrl/envs.hpp"
#include "polyrl/policy.hpp"
#include "polyrl/rng.hpp"
#include "polyrl/runner.hpp"
#include "polyrl/sampler.hpp"

using namespace polyrl;
namespace fs = std::filesystem;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return std::string(buf);
}

double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300});
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

fs::path out_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polyrl_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---------------------------------------------------------------- 1
CriterionResult fjc_scaling() {
  EnsembleAccumulator acc(0);
  for (long c = 0; c < 10000; ++c) {
    Rng rng(derive_seed(101, c));
    acc.add(generate_fjc(3, 100, 1.0, rng));
  }
  const EnsembleStats st = acc.finish();
  const double err = rel_err(st.mean_end_to_end_sq, 100.0);
  return {err <= 0.05,
          fmt("E[|U|^2] = %.3f vs 100 (rel err %.2f%%, limit 5%%)",
              st.mean_end_to_end_sq, 100.0 * err)};
}

// ---------------------------------------------------------------- 2
CriterionResult frc_correlation_decay() {
  const double theta = 0.2;
  const int n_bonds = 400, max_lag = 150;
  EnsembleAccumulator acc(max_lag);
  for (long c = 0; c < 10000; ++c) {
    Rng rng(derive_seed(202, c));
    acc.add(generate_frc(3, n_bonds, 1.0, theta, rng));
  }
  const EnsembleStats st = acc.finish();
  const double ct = std::cos(theta);
  double worst = 0.0;
  int worst_k = 0;
  for (int k = 1; k <= max_lag; ++k) {
    const double err = rel_err(st.corr[k], std::pow(ct, k));
    if (err > worst) {
      worst = err;
      worst_k = k;
    }
  }
  return {worst <= 0.05,
          fmt("max rel err of C(k) vs cos^k(0.2) for k<=150: %.2f%% at k=%d (limit 5%%)",
              100.0 * worst, worst_k)};
}

// ---------------------------------------------------------------- 3
CriterionResult effective_bond_length() {
  const double theta = M_PI / 3.0;
  const int n = 2000;
  EnsembleAccumulator acc(0);
  for (long c = 0; c < 3000; ++c) {
    Rng rng(derive_seed(303, c));
    acc.add(generate_frc(3, n, 1.0, theta, rng));
  }
  const EnsembleStats st = acc.finish();
  const double measured = st.mean_end_to_end_sq / n;
  const double target = effective_bond_length_sq(theta, 1.0);
  const double err = rel_err(measured, target);
  return {err <= 0.10,
          fmt("E[|U|^2]/n = %.4f vs b^2 = %.4f (rel err %.2f%%, limit 10%%)", measured,
              target, 100.0 * err)};
}

// ---------------------------------------------------------------- 4
CriterionResult expansion_ordering() {
  bool pass = true;
  std::string detail;
  for (double theta : {0.1, 0.2, 0.4}) {
    const double lp = persistence_number(theta);
    const int n = std::max(600, static_cast<int>(std::ceil(40.0 * lp)));
    EnsembleAccumulator frc_acc(0), fjc_acc(0);
    for (long c = 0; c < 3000; ++c) {
      Rng r1(derive_seed(404, c * 2));
      Rng r2(derive_seed(404, c * 2 + 1));
      frc_acc.add(generate_frc(3, n, 1.0, theta, r1));
      fjc_acc.add(generate_fjc(3, n, 1.0, r2));
    }
    const EnsembleStats frc = frc_acc.finish();
    const EnsembleStats fjc = fjc_acc.finish();
    const bool order = frc.mean_end_to_end > fjc.mean_end_to_end &&
                       frc.mean_gyration > fjc.mean_gyration;
    const double ratio = frc.mean_end_to_end_sq / fjc.mean_end_to_end_sq;
    const double target = expansion_ratio(lp);
    const double err = rel_err(ratio, target);
    const bool ok = order && err <= 0.10;
    pass = pass && ok;
    detail += fmt("theta=%.1f: order %s, |U|^2 ratio %.1f vs %.1f (err %.1f%%); ", theta,
                  order ? "ok" : "VIOLATED", ratio, target, 100.0 * err);
  }
  detail += "(limit 10%)";
  return {pass, detail};
}

// ---------------------------------------------------------------- 5
CriterionResult lemma2_identity() {
  Rng rng(505);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_int_distribution<int> len(2, 60);
  double worst = 0.0;
  long total = 0;
  for (int dim = 1; dim <= 8; ++dim) {
    for (int rep = 0; rep < 1250; ++rep) {
      const int n = len(rng);  // states in tau
      std::vector<Vec> states{Vec::Zero(dim)};
      for (int i = 0; i < n; ++i) {
        Vec d(dim);
        for (int k = 0; k < dim; ++k) d[k] = step(rng);
        states.push_back(states.back() + d);
      }
      std::vector<Vec> bonds;
      for (int i = 1; i < n; ++i) bonds.push_back(states[i] - states[i - 1]);
      const Vec new_bond = states[n] - states[n - 1];
      Vec center = Vec::Zero(dim);
      for (int i = 0; i < n; ++i) center += states[i];
      center /= n;
      const double lhs = (states[n] - center).squaredNorm();
      const double rhs = center_offset_via_bonds(bonds, new_bond).squaredNorm();
      worst = std::max(worst, rel_err(lhs, rhs));
      ++total;
    }
  }
  return {worst <= 1e-9,
          fmt("%ld trajectories, dims 1-8: max rel err %.2e (limit 1e-9)", total, worst)};
}

// ---------------------------------------------------------------- 6
CriterionResult incremental_gyration() {
  Rng rng(606);
  std::normal_distribution<double> step(0.0, 1.0);
  std::uniform_int_distribution<int> dim_pick(1, 8);
  std::uniform_int_distribution<int> len(2, 200);
  double worst = 0.0;
  long appends = 0;
  while (appends < 10000) {
    const int dim = dim_pick(rng);
    const int n = len(rng);
    std::vector<Vec> states{Vec::Zero(dim)};
    GyrationTracker tr(states[0]);
    for (int i = 1; i < n; ++i) {
      Vec d(dim);
      for (int k = 0; k < dim; ++k) d[k] = step(rng);
      states.push_back(states.back() + d);
      tr.append(states.back());
      ++appends;
      worst = std::max(worst, rel_err(tr.ug2(), gyration_squared_batch(states)));
    }
  }
  return {worst <= 1e-9,
          fmt("%ld appends: max rel err tracker vs batch %.2e (limit 1e-9)", appends,
              worst)};
}

// ---------------------------------------------------------------- 7
CriterionResult bound_coverage() {
  const double theta = 0.2, b0 = 1.0;
  const double lp = persistence_number(theta);
  bool pass = true;
  std::string detail;
  for (double delta : {0.6, 0.8, 0.95}) {
    Rng rng(707);
    long ub_viol = 0, lb_viol = 0, steps = 0;
    while (steps < 10000) {
      const Chain chain = generate_frc(2, 102, b0, theta, rng);
      GyrationTracker tr(chain.states.col(0));
      for (int i = 1; i < chain.n_states(); ++i) {
        BoundInputs in;
        in.n_states = tr.count();
        in.ug2 = tr.ug2();
        in.weighted_bond_sum_norm_sq = tr.weighted_bond_sum().squaredNorm();
        in.b0_sq = b0 * b0;
        in.lp = lp;
        in.delta = delta;
        const double d = tr.append(chain.states.col(i));
        if (in.n_states < 3) continue;
        ++steps;
        if (d > upper_bound(in)) ++ub_viol;
        if (d < lower_bound(in)) ++lb_viol;
      }
    }
    const double ub_rate = static_cast<double>(ub_viol) / steps;
    const double lb_rate = static_cast<double>(lb_viol) / steps;
    pass = pass && ub_rate <= delta + 0.05 && lb_rate <= delta + 0.05;
    detail += fmt("delta=%.2f: UB %.4f, LB %.4f; ", delta, ub_rate, lb_rate);
  }
  detail += "(limits delta+0.05)";
  return {pass, detail};
}

// ---------------------------------------------------------------- 8
CriterionResult action_sampling_angle() {
  Rng rng(808);
  std::uniform_real_distribution<double> angle(kEtaMin, kEtaMax);
  double worst = 0.0;
  long total = 0, fallbacks = 0;
  bool forward = true;
  for (int dim = 2; dim <= 8; ++dim) {
    const ActionSpace box = ActionSpace::symmetric(dim, 1.0);
    for (int i = 0; i < 14300; ++i) {
      const Vec prev = 0.7 * unit_sphere_dir(dim, rng);
      const double eta = angle(rng);
      const SampledAction r = sample_action(prev, eta, box, rng);
      if (r.fallback) {
        ++fallbacks;
        continue;
      }
      const double cos_out = r.pre_clip.dot(prev) / (r.pre_clip.norm() * prev.norm());
      worst = std::max(worst, std::fabs(cos_out - std::cos(eta)));
      forward = forward && r.pre_clip.dot(prev) > 0.0;
      ++total;
    }
  }
  return {worst <= 1e-9 && forward && total > 100000 - 200,
          fmt("%ld samples dims 2-8: max |cos dev| %.2e (limit 1e-9), forward bias %s, "
              "%ld fallbacks",
              total, worst, forward ? "ok" : "VIOLATED", fallbacks)};
}

// -------------------------------------------------------- experiment configs
ExperimentConfig nested_config(Method method, const fs::path& out) {
  ExperimentConfig cfg;
  cfg.env_name = "nested_chambers";
  cfg.env_kind = EnvKind::Nav;
  cfg.nav = make_nested_chambers();
  cfg.method = method;
  cfg.polyrl.theta = 0.2;
  cfg.polyrl.beta = 0.01;
  cfg.polyrl.sigma_sq = 1e-4;
  cfg.learner.epsilon = 0.1;
  cfg.episodes = 20;
  cfg.eval_interval = 1;
  cfg.eval_episodes = 1;
  cfg.seeds = {1, 2, 3, 4, 5};
  cfg.coverage_cell_size = 5.0;
  cfg.output_dir = out;
  return cfg;
}

// ---------------------------------------------------------------- 9
CriterionResult nested_chamber_result() {
  const ExperimentResult poly =
      run_experiment(nested_config(Method::PolyRL, out_dir("nested_poly")));
  const ExperimentResult eps =
      run_experiment(nested_config(Method::EpsilonGreedy, out_dir("nested_eps")));

  const int cap = make_nested_chambers().max_episode_steps;
  int poly_goal_seeds = 0, eps_zero_seeds = 0;
  std::vector<double> poly_cov, eps_cov;
  for (size_t s = 0; s < poly.seeds.size(); ++s) {
    bool poly_reached = false;
    for (const MetricsRow& row : poly.seeds[s].rows)
      if (row.episode < 20 && row.steps_to_goal < cap) poly_reached = true;
    if (poly_reached) ++poly_goal_seeds;

    bool eps_reached = false;
    for (const MetricsRow& row : eps.seeds[s].rows)
      if (row.episode < 11 && row.steps_to_goal < cap) eps_reached = true;
    if (!eps_reached) ++eps_zero_seeds;

    for (const MetricsRow& row : poly.seeds[s].rows)
      if (row.episode == 10) poly_cov.push_back(row.coverage);
    for (const MetricsRow& row : eps.seeds[s].rows)
      if (row.episode == 10) eps_cov.push_back(row.coverage);
  }
  const double poly_med = median(poly_cov), eps_med = median(eps_cov);
  const bool pass =
      poly_goal_seeds >= 4 && eps_zero_seeds >= 4 && poly_med >= 2.0 * eps_med;
  return {pass,
          fmt("PolyRL goal in %d/5 seeds (need >=4); eps-greedy zero-goal in %d/5 "
              "(need >=4); 11-ep coverage median %.3f vs %.3f (need >=2x)",
              poly_goal_seeds, eps_zero_seeds, poly_med, eps_med)};
}

// ---------------------------------------------------------------- 10
CriterionResult chamber400_directional() {
  bool pass = true;
  std::string detail;
  for (bool puddle : {false, true}) {
    auto cfg_for = [&](Method m, const std::string& tag) {
      ExperimentConfig cfg;
      cfg.env_name = puddle ? "chamber400_puddle" : "chamber400";
      cfg.env_kind = EnvKind::Nav;
      cfg.nav = make_chamber400(puddle);
      cfg.method = m;
      cfg.polyrl.theta = 0.2;
      cfg.polyrl.beta = 0.01;
      cfg.polyrl.sigma_sq = 1e-4;
      cfg.learner.epsilon = 0.1;
      cfg.episodes = 200;
      cfg.eval_interval = 1;
      cfg.eval_episodes = 1;
      cfg.seeds = {1, 2, 3, 4, 5};
      cfg.coverage_cell_size = 10.0;
      cfg.output_dir = out_dir(tag);
      return cfg;
    };
    const std::string suffix = puddle ? "_puddle" : "";
    const ExperimentResult poly =
        run_experiment(cfg_for(Method::PolyRL, "c400_poly" + suffix));
    const ExperimentResult eps =
        run_experiment(cfg_for(Method::EpsilonGreedy, "c400_eps" + suffix));

    auto mean_eval = [](const ExperimentResult& r) {
      double sum = 0.0;
      long n = 0;
      for (const SeedResult& sr : r.seeds)
        for (const MetricsRow& row : sr.rows) {
          if (!std::isnan(row.eval_return)) {
            sum += row.eval_return;
            ++n;
          }
        }
      return n ? sum / n : 0.0;
    };
    const double mp = mean_eval(poly), me = mean_eval(eps);
    pass = pass && mp > me;
    detail += fmt("%s: PolyRL %.1f vs eps-greedy %.1f; ",
                  puddle ? "with puddle" : "no puddle", mp, me);
  }
  detail += "(need strictly greater)";
  return {pass, detail};
}

// ---------------------------------------------------------------- 11
CriterionResult sparsity_robustness() {
  const std::vector<double> lambdas = {5.0, 10.0, 20.0};
  const int cap = 400;
  // med[method][lambda index], pooled across seeds and episodes
  std::vector<std::vector<double>> med(2, std::vector<double>(lambdas.size(), 0.0));
  int poly_attain_seeds = 0, uni_fail_seeds = 0;

  for (size_t li = 0; li < lambdas.size(); ++li) {
    for (int m = 0; m < 2; ++m) {
      ExperimentConfig cfg;
      cfg.env_name = "pointmass";
      cfg.env_kind = EnvKind::PointMass;
      cfg.pointmass.lambda = lambdas[li];
      cfg.pointmass.max_episode_steps = cap;
      cfg.method = m == 0 ? Method::PolyRL : Method::UniformRandom;
      cfg.polyrl.theta = 0.2;
      cfg.polyrl.beta = 0.01;
      cfg.polyrl.sigma_sq = 1e-4;
      cfg.episodes = 20;
      cfg.eval_interval = 1;
      cfg.eval_episodes = 1;
      cfg.seeds = {1, 2, 3, 4, 5};
      cfg.coverage_cell_size = lambdas[li] / 4.0;
      cfg.output_dir = out_dir(fmt("pm_l%zu_m%d", li, m));
      const ExperimentResult res = run_experiment(cfg);

      std::vector<double> pooled;
      int attain_seeds = 0;
      for (const SeedResult& sr : res.seeds) {
        std::vector<double> times;
        for (const MetricsRow& row : sr.rows) times.push_back(row.steps_to_goal);
        pooled.insert(pooled.end(), times.begin(), times.end());
        if (median(times) < cap) ++attain_seeds;
      }
      med[m][li] = median(pooled);
      if (li == 2 && m == 0) poly_attain_seeds = attain_seeds;
      if (li == 2 && m == 1) uni_fail_seeds = 5 - attain_seeds;
    }
  }

  const double poly_growth = med[0][2] / med[0][0];
  const double uni_growth = med[1][2] / med[1][0];
  const bool pass =
      poly_growth < uni_growth && poly_attain_seeds >= 4 && uni_fail_seeds >= 4;
  return {pass,
          fmt("median t_first (poly) %g/%g/%g, (uniform) %g/%g/%g; growth %.2fx vs "
              "%.2fx; lambda=20 poly attains %d/5, uniform fails %d/5",
              med[0][0], med[0][1], med[0][2], med[1][0], med[1][1], med[1][2],
              poly_growth, uni_growth, poly_attain_seeds, uni_fail_seeds)};
}

// ---------------------------------------------------------------- 12
CriterionResult determinism() {
  auto run_to = [](const fs::path& dir) {
    ExperimentConfig cfg = nested_config(Method::PolyRL, dir);
    cfg.episodes = 3;
    cfg.nav.max_episode_steps = 300;
    cfg.seeds = {1, 2};
    cfg.write_decisions = true;
    cfg.write_trajectories = true;
    run_experiment(cfg);
  };
  const fs::path a = out_dir("det_a"), b = out_dir("det_b");
  run_to(a);
  run_to(b);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  bool pass = true;
  long files = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    const fs::path rel = entry.path().filename();
    pass = pass && slurp(a / rel) == slurp(b / rel);
    ++files;
  }
  return {pass && files >= 6,
          fmt("%ld output files compared byte-for-byte: %s", files,
              pass ? "identical" : "MISMATCH")};
}

struct Criterion {
  const char* name;
  std::function<CriterionResult()> fn;
  double time_limit_s;  // 0 = none
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[i + 1]);

  const std::vector<Criterion> criteria = {
      {"FJC scaling E[|U|^2] = n b0^2", fjc_scaling, 30.0},
      {"FRC correlation decay C(k) ~ cos^k", frc_correlation_decay, 60.0},
      {"Effective bond length (theta = pi/3)", effective_bond_length, 0.0},
      {"Expansion ordering FRC vs FJC", expansion_ordering, 0.0},
      {"Lemma 2 bond-vector identity", lemma2_identity, 10.0},
      {"Incremental gyration vs batch oracle", incremental_gyration, 0.0},
      {"Bound coverage on synthetic FRC", bound_coverage, 0.0},
      {"Action sampling angle preservation", action_sampling_angle, 0.0},
      {"Nested chambers: PolyRL vs eps-greedy", nested_chamber_result, 600.0},
      {"400x400 chamber directional result", chamber400_directional, 0.0},
      {"Sparsity robustness on point mass", sparsity_robustness, 0.0},
      {"Determinism of (config, seed) outputs", determinism, 0.0},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only > 0 && static_cast<int>(i + 1) != only) continue;
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = criteria[i].fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (criteria[i].time_limit_s > 0.0 && secs > criteria[i].time_limit_s) {
      r.pass = false;
      r.detail += fmt(" [EXCEEDED %.0fs runtime limit]", criteria[i].time_limit_s);
    }
    std::printf("[%2zu/12] %s  %s — %s (%.1fs)\n", i + 1, r.pass ? "PASS" : "FAIL",
                criteria[i].name, r.detail.c_str(), secs);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (only == 0) std::printf("%d/12 criteria passed\n", 12 - failures);
  return failures;
}
