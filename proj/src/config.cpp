#include "polyrl/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace polyrl {

using nlohmann::json;

Method parse_method(const std::string& name) {
  if (name == "polyrl") return Method::PolyRL;
  if (name == "epsilon_greedy" || name == "epsilon-greedy") return Method::EpsilonGreedy;
  if (name == "uniform" || name == "uniform_random") return Method::UniformRandom;
  throw ConfigError("unknown method: " + name);
}

const char* method_name(Method m) {
  switch (m) {
    case Method::PolyRL: return "polyrl";
    case Method::EpsilonGreedy: return "epsilon_greedy";
    case Method::UniformRandom: return "uniform";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (episodes < 1) throw ConfigError("episodes must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (eval_interval < 1) throw ConfigError("eval_interval must be >= 1");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  if (!(coverage_cell_size > 0.0)) throw ConfigError("coverage_cell_size must be > 0");
  try {
    polyrl.validate();
    if (env_kind == EnvKind::Nav)
      nav.validate();
    else
      pointmass.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (env_kind == EnvKind::PointMass && pointmass.dim != 2 &&
      method != Method::UniformRandom)
    throw ConfigError("pointmass dim must be 2 for learner-backed methods");
  if (!(learner.epsilon >= 0.0 && learner.epsilon <= 1.0) ||
      !(learner.epsilon_final >= 0.0 && learner.epsilon_final <= 1.0))
    throw ConfigError("epsilon must lie in [0, 1]");
}

namespace {

Point2 point_from(const json& j, const char* key) {
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 2)
    throw ConfigError(std::string(key) + " must be a [x, y] array");
  return Point2(arr[0].get<double>(), arr[1].get<double>());
}

void apply_nav_overrides(NavSpec& spec, const json& env, double& door_width,
                         bool is_nested) {
  if (env.contains("door_width")) {
    door_width = env.at("door_width").get<double>();
    if (is_nested) spec = make_nested_chambers(door_width);
  }
  if (env.contains("width")) spec.width = env.at("width").get<double>();
  if (env.contains("height")) spec.height = env.at("height").get<double>();
  if (env.contains("start")) spec.start = point_from(env, "start");
  if (env.contains("start_radius")) spec.start_radius = env.at("start_radius").get<double>();
  if (env.contains("goal")) spec.goal = point_from(env, "goal");
  if (env.contains("goal_radius")) spec.goal_radius = env.at("goal_radius").get<double>();
  if (env.contains("goal_reward")) spec.goal_reward = env.at("goal_reward").get<double>();
  if (env.contains("puddle")) {
    const auto& p = env.at("puddle");
    if (!p.is_array() || p.size() != 4)
      throw ConfigError("puddle must be a [x0, y0, x1, y1] array");
    spec.has_puddle = true;
    spec.puddle_low = Point2(p[0].get<double>(), p[1].get<double>());
    spec.puddle_high = Point2(p[2].get<double>(), p[3].get<double>());
  }
  if (env.contains("puddle_reward")) spec.puddle_reward = env.at("puddle_reward").get<double>();
  if (env.contains("max_step_length"))
    spec.max_step_length = env.at("max_step_length").get<double>();
  if (env.contains("max_episode_steps"))
    spec.max_episode_steps = env.at("max_episode_steps").get<int>();
  if (env.contains("walls")) {
    spec.walls.clear();
    for (const auto& w : env.at("walls")) {
      if (!w.is_array() || w.size() != 4)
        throw ConfigError("each wall must be a [ax, ay, bx, by] array");
      spec.walls.push_back(Wall{Point2(w[0].get<double>(), w[1].get<double>()),
                                Point2(w[2].get<double>(), w[3].get<double>())});
    }
  }
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("environment")) {
      const auto& env = j.at("environment");
      cfg.env_name = env.value("name", cfg.env_name);
      double door_width = 4.0;
      if (cfg.env_name == "nested_chambers") {
        cfg.env_kind = EnvKind::Nav;
        cfg.nav = make_nested_chambers();
        apply_nav_overrides(cfg.nav, env, door_width, true);
      } else if (cfg.env_name == "chamber400") {
        cfg.env_kind = EnvKind::Nav;
        cfg.nav = make_chamber400(false);
        apply_nav_overrides(cfg.nav, env, door_width, false);
      } else if (cfg.env_name == "chamber400_puddle") {
        cfg.env_kind = EnvKind::Nav;
        cfg.nav = make_chamber400(true);
        apply_nav_overrides(cfg.nav, env, door_width, false);
      } else if (cfg.env_name == "open") {
        cfg.env_kind = EnvKind::Nav;
        cfg.nav = make_open_box(env.value("width", 400.0), env.value("height", 400.0));
        apply_nav_overrides(cfg.nav, env, door_width, false);
      } else if (cfg.env_name == "pointmass") {
        cfg.env_kind = EnvKind::PointMass;
        cfg.pointmass.dim = env.value("dim", cfg.pointmass.dim);
        cfg.pointmass.lambda = env.value("lambda", cfg.pointmass.lambda);
        cfg.pointmass.action_magnitude =
            env.value("action_magnitude", cfg.pointmass.action_magnitude);
        cfg.pointmass.max_step_length =
            env.value("max_step_length", cfg.pointmass.max_step_length);
        cfg.pointmass.max_episode_steps =
            env.value("max_episode_steps", cfg.pointmass.max_episode_steps);
      } else {
        throw ConfigError("unknown environment name: " + cfg.env_name);
      }
    } else {
      cfg.nav = make_nested_chambers();
    }

    if (j.contains("method")) cfg.method = parse_method(j.at("method").get<std::string>());

    if (j.contains("polyrl")) {
      const auto& p = j.at("polyrl");
      cfg.polyrl.beta = p.value("beta", cfg.polyrl.beta);
      cfg.polyrl.theta = p.value("theta", cfg.polyrl.theta);
      cfg.polyrl.sigma_sq = p.value("sigma_sq", cfg.polyrl.sigma_sq);
      if (p.contains("switch_distribution")) {
        const std::string s = p.at("switch_distribution").get<std::string>();
        if (s == "normal")
          cfg.polyrl.switch_distribution = SwitchDistribution::Normal;
        else if (s == "uniform")
          cfg.polyrl.switch_distribution = SwitchDistribution::Uniform;
        else
          throw ConfigError("switch_distribution must be 'normal' or 'uniform'");
      }
      cfg.polyrl.break_on_obtuse_angle =
          p.value("break_on_obtuse_angle", cfg.polyrl.break_on_obtuse_angle);
      cfg.polyrl.min_segment_states =
          p.value("min_segment_states", cfg.polyrl.min_segment_states);
      if (p.contains("a0")) {
        const std::string s = p.at("a0").get<std::string>();
        if (s == "target")
          cfg.a0_from_target = true;
        else if (s == "uniform")
          cfg.a0_from_target = false;
        else
          throw ConfigError("a0 must be 'uniform' or 'target'");
      }
    }

    if (j.contains("learner")) {
      const auto& l = j.at("learner");
      cfg.learner.alpha = l.value("alpha", cfg.learner.alpha);
      cfg.learner.gamma = l.value("gamma", cfg.learner.gamma);
      cfg.learner.num_directions = l.value("num_directions", cfg.learner.num_directions);
      cfg.learner.tilings = l.value("tilings", cfg.learner.tilings);
      cfg.learner.tiles_per_dim = l.value("tiles_per_dim", cfg.learner.tiles_per_dim);
      cfg.learner.epsilon = l.value("epsilon", cfg.learner.epsilon);
      cfg.learner.epsilon_final = l.value("epsilon_final", cfg.learner.epsilon);
    }

    cfg.episodes = j.value("episodes", cfg.episodes);
    cfg.eval_interval = j.value("eval_interval", cfg.eval_interval);
    cfg.eval_episodes = j.value("eval_episodes", cfg.eval_episodes);
    if (j.contains("seeds")) {
      cfg.seeds.clear();
      for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    if (j.contains("output_dir"))
      cfg.output_dir = j.at("output_dir").get<std::string>();
    cfg.coverage_cell_size = j.value("coverage_cell_size", cfg.coverage_cell_size);
    cfg.write_trajectories = j.value("write_trajectories", cfg.write_trajectories);
    cfg.write_decisions = j.value("write_decisions", cfg.write_decisions);

    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      auto grid = [&](const char* key, std::vector<double>& out) {
        if (s.contains(key))
          for (const auto& v : s.at(key)) out.push_back(v.get<double>());
      };
      grid("theta", cfg.sweep_theta);
      grid("sigma_sq", cfg.sweep_sigma_sq);
      grid("beta", cfg.sweep_beta);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

}  // namespace polyrl
