#include "polyrl/envs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polyrl {

namespace {
constexpr double kContactBackoff = 1e-6;

// Earliest intersection parameter of motion p -> p + d with segment (a, b),
// or +inf when they miss.
double segment_hit_param(const Point2& p, const Point2& d, const Point2& a,
                         const Point2& b) {
  const Point2 w = b - a;
  const double denom = d.x() * w.y() - d.y() * w.x();
  if (std::fabs(denom) < 1e-18) return std::numeric_limits<double>::infinity();
  const Point2 ap = a - p;
  const double t = (ap.x() * w.y() - ap.y() * w.x()) / denom;  // along motion
  const double u = (ap.x() * d.y() - ap.y() * d.x()) / denom;  // along wall
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0)
    return std::numeric_limits<double>::infinity();
  return t;
}

// Distance from point q to segment (a, b).
double point_segment_distance(const Point2& q, const Point2& a, const Point2& b) {
  const Point2 w = b - a;
  const double len_sq = w.squaredNorm();
  if (len_sq < 1e-24) return (q - a).norm();
  const double t = std::clamp((q - a).dot(w) / len_sq, 0.0, 1.0);
  return (q - (a + t * w)).norm();
}

std::vector<Wall> boundary_walls(const NavSpec& spec) {
  const double w = spec.width, h = spec.height;
  return {{{0, 0}, {w, 0}}, {{w, 0}, {w, h}}, {{w, h}, {0, h}}, {{0, h}, {0, 0}}};
}
}  // namespace

void NavSpec::validate() const {
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("NavSpec: box dimensions must be positive");
  if (!(goal_radius > 0.0)) throw std::invalid_argument("NavSpec: goal radius must be > 0");
  if (!(start_radius >= 0.0))
    throw std::invalid_argument("NavSpec: start radius must be >= 0");
  if (!(max_step_length > 0.0))
    throw std::invalid_argument("NavSpec: max step length must be > 0");
  if (max_episode_steps < 1)
    throw std::invalid_argument("NavSpec: max episode steps must be >= 1");
  auto inside = [&](const Point2& p) {
    return p.x() > 0.0 && p.x() < width && p.y() > 0.0 && p.y() < height;
  };
  if (!inside(start) || !inside(goal))
    throw std::invalid_argument("NavSpec: start and goal must lie inside the box");
  for (const Wall& wall : walls)
    if (point_segment_distance(start, wall.a, wall.b) < 1e-9 ||
        point_segment_distance(goal, wall.a, wall.b) < 1e-9)
      throw std::invalid_argument("NavSpec: start/goal must not lie on a wall");
}

NavState nav_reset(const NavSpec& spec, Rng& rng) {
  spec.validate();
  NavState st;
  st.position = spec.start;
  if (spec.start_radius > 0.0) {
    // Uniform in the disc by rejection.
    std::uniform_real_distribution<double> u(-spec.start_radius, spec.start_radius);
    while (true) {
      const Point2 off{u(rng), u(rng)};
      if (off.squaredNorm() <= spec.start_radius * spec.start_radius) {
        st.position = spec.start + off;
        break;
      }
    }
  }
  return st;
}

NavStepResult nav_step(const NavSpec& spec, const NavState& state, const Vec& action) {
  if (state.done) throw std::logic_error("nav_step: episode already finished");
  if (action.size() != 2) throw std::invalid_argument("nav_step: action must be 2D");

  Point2 disp{action[0], action[1]};
  const double req = disp.norm();
  if (req > spec.max_step_length) disp *= spec.max_step_length / req;

  NavStepResult res;
  res.state = state;
  ++res.state.steps_elapsed;

  Point2 end = state.position;
  if (disp.norm() > 1e-15) {
    double hit = std::numeric_limits<double>::infinity();
    for (const Wall& wall : boundary_walls(spec))
      hit = std::min(hit, segment_hit_param(state.position, disp, wall.a, wall.b));
    for (const Wall& wall : spec.walls)
      hit = std::min(hit, segment_hit_param(state.position, disp, wall.a, wall.b));
    double travel = disp.norm();
    if (std::isfinite(hit)) travel = std::max(0.0, hit * disp.norm() - kContactBackoff);
    end = state.position + disp.normalized() * travel;
  }

  // Goal is granted if the motion segment enters the goal disc.
  const bool reached =
      point_segment_distance(spec.goal, state.position, end) <= spec.goal_radius;
  if (reached) res.reward += spec.goal_reward;
  res.reached_goal = reached;

  if (spec.has_puddle && end.x() >= spec.puddle_low.x() && end.x() <= spec.puddle_high.x() &&
      end.y() >= spec.puddle_low.y() && end.y() <= spec.puddle_high.y())
    res.reward += spec.puddle_reward;

  res.state.position = end;
  res.done = reached || res.state.steps_elapsed >= spec.max_episode_steps;
  res.state.done = res.done;
  return res;
}

void SparsePointMassSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("SparsePointMassSpec: dim must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("SparsePointMassSpec: lambda must be > 0");
  if (!(action_magnitude > 0.0) || !(max_step_length > 0.0))
    throw std::invalid_argument("SparsePointMassSpec: magnitudes must be > 0");
  if (max_episode_steps < 1)
    throw std::invalid_argument("SparsePointMassSpec: max episode steps must be >= 1");
}

PointMassState pointmass_reset(const SparsePointMassSpec& spec) {
  spec.validate();
  PointMassState st;
  st.position = Vec::Zero(spec.dim);
  return st;
}

PointMassStepResult pointmass_step(const SparsePointMassSpec& spec,
                                   const PointMassState& state, const Vec& action) {
  if (state.done) throw std::logic_error("pointmass_step: episode already finished");
  if (action.size() != spec.dim)
    throw std::invalid_argument("pointmass_step: action dimension mismatch");

  Vec disp = action.cwiseMax(-spec.action_magnitude).cwiseMin(spec.action_magnitude);
  const double n = disp.norm();
  if (n > spec.max_step_length) disp *= spec.max_step_length / n;

  PointMassStepResult res;
  res.state = state;
  res.state.position += disp;
  ++res.state.steps_elapsed;

  if (!state.reward_granted && res.state.position.norm() >= spec.lambda) {
    res.reward = 1.0;
    res.state.reward_granted = true;
  }
  res.done = res.state.steps_elapsed >= spec.max_episode_steps;
  res.state.done = res.done;
  return res;
}

CoverageGrid::CoverageGrid(double width, double height, double cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("CoverageGrid: cell size must be > 0");
  nx_ = std::max(1, static_cast<int>(std::ceil(width / cell_size)));
  ny_ = std::max(1, static_cast<int>(std::ceil(height / cell_size)));
  cell_ = cell_size;
  visited_.assign(static_cast<size_t>(nx_) * ny_, 0);
}

void CoverageGrid::visit(const Point2& p) {
  int cx = std::clamp(static_cast<int>(std::floor(p.x() / cell_)), 0, nx_ - 1);
  int cy = std::clamp(static_cast<int>(std::floor(p.y() / cell_)), 0, ny_ - 1);
  char& cell = visited_[static_cast<size_t>(cy) * nx_ + cx];
  if (!cell) {
    cell = 1;
    ++count_;
  }
}

double CoverageGrid::fraction() const {
  return static_cast<double>(count_) / static_cast<double>(visited_.size());
}

double coverage(const std::vector<Point2>& trajectory, const NavSpec& spec,
                double cell_size) {
  if (trajectory.empty()) return 0.0;
  CoverageGrid grid(spec.width, spec.height, cell_size);
  for (const Point2& p : trajectory) grid.visit(p);
  return grid.fraction();
}

NavSpec make_nested_chambers(double door_width) {
  NavSpec spec;
  spec.width = 100.0;
  spec.height = 100.0;
  spec.start = {50.0, 50.0};
  spec.start_radius = 0.5;
  spec.goal = {50.0, 77.0};  // just outside the door mouth
  spec.goal_radius = 0.5;
  spec.goal_reward = 100.0;
  spec.max_step_length = 1.0;
  spec.max_episode_steps = 6000;

  // 50x50 inner room with a door gap centered on the north wall. The gap
  // sits off the start->goal axis so an unlearned tie-break march cannot
  // walk straight out.
  const double lo = 25.0, hi = 75.0;
  const double gl = 50.0 - door_width / 2.0, gr = 50.0 + door_width / 2.0;
  spec.walls = {
      {{lo, lo}, {hi, lo}},  // south
      {{hi, lo}, {hi, hi}},  // east
      {{lo, lo}, {lo, hi}},  // west
      {{lo, hi}, {gl, hi}},  // north, left of door
      {{gr, hi}, {hi, hi}},  // north, right of door
  };
  return spec;
}

NavSpec make_chamber400(bool with_puddle) {
  NavSpec spec;
  spec.width = 400.0;
  spec.height = 400.0;
  spec.start = {200.0, 200.0};
  spec.start_radius = 0.5;
  spec.goal = {340.0, 340.0};
  spec.goal_radius = 10.0;
  spec.goal_reward = 1000.0;
  spec.max_step_length = 1.0;
  spec.max_episode_steps = 2000;
  if (with_puddle) {
    spec.has_puddle = true;
    spec.puddle_low = {250.0, 250.0};
    spec.puddle_high = {290.0, 290.0};
    spec.puddle_reward = -100.0;
  }
  return spec;
}

NavSpec make_open_box(double width, double height) {
  NavSpec spec;
  spec.width = width;
  spec.height = height;
  spec.start = {width / 2.0, height / 2.0};
  spec.start_radius = 0.0;
  spec.goal = {width - 1.0, height - 1.0};
  spec.goal_radius = 0.5;
  spec.goal_reward = 100.0;
  spec.max_step_length = 1.0;
  spec.max_episode_steps = 20000;
  return spec;
}

}  // namespace polyrl
