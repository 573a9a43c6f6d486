#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyrl/envs.hpp"
#include "polyrl/policy.hpp"

namespace polyrl {

// Thrown on invalid configuration; mapped to exit code 2 by the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { PolyRL, EpsilonGreedy, UniformRandom };

Method parse_method(const std::string& name);
const char* method_name(Method m);

enum class EnvKind { Nav, PointMass };

struct LearnerConfig {
  double alpha = 0.01;
  double gamma = 0.99;
  int num_directions = 16;
  int tilings = 8;
  int tiles_per_dim = 16;
  double epsilon = 0.1;
  double epsilon_final = 0.1;  // equal to epsilon -> constant schedule
};

struct ExperimentConfig {
  std::string env_name = "nested_chambers";
  EnvKind env_kind = EnvKind::Nav;
  NavSpec nav;
  SparsePointMassSpec pointmass;

  Method method = Method::PolyRL;
  PolyRLParams polyrl;
  bool a0_from_target = false;  // initial action source; default uniform on the box
  LearnerConfig learner;

  int episodes = 20;
  int eval_interval = 1;
  int eval_episodes = 1;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::filesystem::path output_dir = "out";
  double coverage_cell_size = 5.0;
  bool write_trajectories = false;
  bool write_decisions = false;

  // Sweep grids; empty means "use the single configured value".
  std::vector<double> sweep_theta;
  std::vector<double> sweep_sigma_sq;
  std::vector<double> sweep_beta;

  void validate() const;
};

// Builds the named preset and applies any overrides present in the JSON
// "environment" object.
ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace polyrl
