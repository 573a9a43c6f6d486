#pragma once

#include <Eigen/Core>
#include <vector>

#include "polyrl/rng.hpp"
#include "polyrl/vec.hpp"

namespace polyrl {

using Point2 = Eigen::Vector2d;

// A thin wall segment; motion stops at contact.
struct Wall {
  Point2 a, b;
};

// Continuous 2D sparse-reward navigation task: an outer box, optional
// inner walls, a start disc, a terminal goal disc and an optional puddle
// penalty rectangle.
struct NavSpec {
  double width = 100.0;
  double height = 100.0;
  std::vector<Wall> walls;  // inner walls; the outer box is implicit
  Point2 start{50.0, 50.0};
  double start_radius = 0.5;
  Point2 goal{90.0, 50.0};
  double goal_radius = 0.5;
  double goal_reward = 100.0;
  bool has_puddle = false;
  Point2 puddle_low{0.0, 0.0};
  Point2 puddle_high{0.0, 0.0};
  double puddle_reward = -100.0;
  double max_step_length = 1.0;
  int max_episode_steps = 2000;

  void validate() const;
};

struct NavState {
  Point2 position;
  int steps_elapsed = 0;
  bool done = false;
};

struct NavStepResult {
  NavState state;
  double reward = 0.0;
  bool done = false;
  bool reached_goal = false;
};

// Start position uniform within the start disc; radius 0 gives the exact
// start point.
NavState nav_reset(const NavSpec& spec, Rng& rng);

// Displacement = action capped to max_step_length; motion stops 1e-6
// before the first wall or boundary contact, terminates on goal-disc entry
// or the step cap, and pays the puddle penalty when the end position lies
// inside the puddle.
NavStepResult nav_step(const NavSpec& spec, const NavState& state, const Vec& action);

// Sparse locomotion analog: +1 exactly once per episode, the first time
// the position crosses distance lambda from the origin.
struct SparsePointMassSpec {
  int dim = 2;
  double lambda = 10.0;
  double action_magnitude = 1.0;  // symmetric action box half-width
  double max_step_length = 1.0;
  int max_episode_steps = 400;

  void validate() const;
};

struct PointMassState {
  Vec position;
  int steps_elapsed = 0;
  bool reward_granted = false;
  bool done = false;
};

struct PointMassStepResult {
  PointMassState state;
  double reward = 0.0;
  bool done = false;
};

PointMassState pointmass_reset(const SparsePointMassSpec& spec);
PointMassStepResult pointmass_step(const SparsePointMassSpec& spec,
                                   const PointMassState& state, const Vec& action);

// Fraction of free-area grid cells visited by the trajectory.
double coverage(const std::vector<Point2>& trajectory, const NavSpec& spec,
                double cell_size);

// Incremental visited-cell accounting for long runs.
class CoverageGrid {
 public:
  CoverageGrid(double width, double height, double cell_size);
  void visit(const Point2& p);
  double fraction() const;
  long total_cells() const { return static_cast<long>(nx_) * ny_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool visited(int cx, int cy) const { return visited_[cy * nx_ + cx]; }

 private:
  int nx_, ny_;
  double cell_;
  std::vector<char> visited_;
  long count_ = 0;
};

// Preset environments.
NavSpec make_nested_chambers(double door_width = 4.0);
NavSpec make_chamber400(bool with_puddle);
NavSpec make_open_box(double width, double height);

}  // namespace polyrl
