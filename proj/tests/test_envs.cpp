#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "polyrl/envs.hpp"
#include "polyrl/sampler.hpp"

using namespace polyrl;

namespace {

Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

// Fine-stepped motion oracle: advance in 1e-4 increments, stopping before
// the first increment that crosses a wall or the boundary.
Point2 fine_step_oracle(const NavSpec& spec, const Point2& from, Point2 disp) {
  const double req = disp.norm();
  if (req > spec.max_step_length) disp *= spec.max_step_length / req;
  const double len = disp.norm();
  if (len < 1e-15) return from;
  const Point2 dir = disp / len;

  std::vector<Wall> walls = spec.walls;
  walls.push_back({{0, 0}, {spec.width, 0}});
  walls.push_back({{spec.width, 0}, {spec.width, spec.height}});
  walls.push_back({{spec.width, spec.height}, {0, spec.height}});
  walls.push_back({{0, spec.height}, {0, 0}});

  auto crosses = [&](const Point2& a, const Point2& b) {
    for (const Wall& w : walls) {
      const Point2 wd = w.b - w.a;
      const Point2 md = b - a;
      const double den = md.x() * wd.y() - md.y() * wd.x();
      if (std::fabs(den) < 1e-18) continue;
      const Point2 ap = w.a - a;
      const double t = (ap.x() * wd.y() - ap.y() * wd.x()) / den;
      const double u = (ap.x() * md.y() - ap.y() * md.x()) / den;
      if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return true;
    }
    return false;
  };

  Point2 pos = from;
  double travelled = 0.0;
  const double inc = 1e-4;
  while (travelled + inc <= len) {
    const Point2 next = pos + inc * dir;
    if (crosses(pos, next)) return pos;
    pos = next;
    travelled += inc;
  }
  const Point2 next = pos + (len - travelled) * dir;
  if (!crosses(pos, next)) pos = next;
  return pos;
}

}  // namespace

TEST_CASE("nav reset") {
  Rng rng(1);
  SUBCASE("zero start radius is exact") {
    NavSpec spec = make_nested_chambers();
    spec.start_radius = 0.0;
    const NavState st = nav_reset(spec, rng);
    CHECK((st.position - spec.start).norm() == 0.0);
    CHECK(st.steps_elapsed == 0);
    CHECK(!st.done);
  }
  SUBCASE("resets stay within the start disc and the inner room") {
    const NavSpec spec = make_nested_chambers();
    for (int i = 0; i < 1000; ++i) {
      const NavState st = nav_reset(spec, rng);
      CHECK((st.position - spec.start).norm() <= spec.start_radius);
      CHECK(st.position.x() > 25.0);
      CHECK(st.position.x() < 75.0);
      CHECK(st.position.y() > 25.0);
      CHECK(st.position.y() < 75.0);
    }
  }
}

TEST_CASE("nav step basics") {
  const NavSpec spec = make_nested_chambers();
  Rng rng(2);
  NavState st = nav_reset(spec, rng);

  SUBCASE("zero action stands still with zero reward") {
    const NavStepResult r = nav_step(spec, st, vec2(0, 0));
    CHECK((r.state.position - st.position).norm() == 0.0);
    CHECK(r.reward == 0.0);
    CHECK(!r.done);
  }
  SUBCASE("long actions are capped to max_step_length") {
    const NavStepResult r = nav_step(spec, st, vec2(5, 0));
    CHECK((r.state.position - st.position).norm() ==
          doctest::Approx(spec.max_step_length).epsilon(1e-9));
  }
  SUBCASE("goal entry is terminal and pays the goal reward") {
    NavSpec open = make_open_box(100, 100);
    open.goal = {51.0, 50.0};
    open.goal_radius = 0.6;
    NavState s0 = nav_reset(open, rng);
    const NavStepResult r = nav_step(open, s0, vec2(1, 0));
    CHECK(r.reward == doctest::Approx(open.goal_reward));
    CHECK(r.done);
    CHECK(r.reached_goal);
  }
  SUBCASE("stepping a finished episode throws") {
    st.done = true;
    CHECK_THROWS_AS(nav_step(spec, st, vec2(0, 0)), std::logic_error);
  }
}

TEST_CASE("wall contact stops on the near side") {
  NavSpec spec = make_open_box(10, 10);
  spec.walls.push_back({{5.0, 0.0}, {5.0, 10.0}});
  spec.max_step_length = 3.0;
  NavState st;
  st.position = {4.0, 5.0};
  const NavStepResult r = nav_step(spec, st, vec2(2, 0));
  CHECK(r.state.position.x() == doctest::Approx(5.0 - 1e-6).epsilon(1e-9));
  CHECK(r.state.position.y() == doctest::Approx(5.0));
}

TEST_CASE("puddle penalty applies to end positions inside the rectangle") {
  NavSpec spec = make_chamber400(true);
  NavState st;
  st.position = {249.5, 270.0};
  const NavStepResult r = nav_step(spec, st, vec2(1, 0));
  CHECK(r.reward == doctest::Approx(spec.puddle_reward));
  CHECK(!r.done);
  const NavStepResult r2 = nav_step(spec, r.state, vec2(-1, 0));
  CHECK(r2.reward == 0.0);
}

TEST_CASE("collision handling matches the fine-stepped oracle") {
  const NavSpec spec = make_nested_chambers();
  Rng rng(3);
  std::uniform_real_distribution<double> coord(26.0, 74.0);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 150; ++i) {
    NavState st;
    st.position = {coord(rng), coord(rng)};
    const Point2 disp{d(rng), d(rng)};
    const NavStepResult r = nav_step(spec, st, vec2(disp.x(), disp.y()));
    const Point2 oracle = fine_step_oracle(spec, st.position, disp);
    CHECK((r.state.position - oracle).norm() < 1e-3);
  }
}

TEST_CASE("containment under random action fuzzing") {
  const NavSpec spec = make_nested_chambers();
  Rng rng(4);
  const ActionSpace space = ActionSpace::symmetric(2, 1.0);
  NavState st = nav_reset(spec, rng);
  long nonzero_rewards = 0;
  for (int t = 0; t < 100000; ++t) {
    if (st.done) st = nav_reset(spec, rng);
    const Vec a = space.uniform_point(rng);
    const Point2 before = st.position;
    const NavStepResult r = nav_step(spec, st, a);
    st = r.state;
    CHECK(st.position.x() >= 0.0);
    CHECK(st.position.x() <= spec.width);
    CHECK(st.position.y() >= 0.0);
    CHECK(st.position.y() <= spec.height);
    // The motion segment must not have crossed the inner walls.
    const Point2 move = st.position - before;
    for (const Wall& w : spec.walls) {
      const Point2 wd = w.b - w.a;
      const double den = move.x() * wd.y() - move.y() * wd.x();
      if (std::fabs(den) < 1e-18) continue;
      const Point2 ap = w.a - before;
      const double tt = (ap.x() * wd.y() - ap.y() * wd.x()) / den;
      const double uu = (ap.x() * move.y() - ap.y() * move.x()) / den;
      CHECK(!(tt > 0.0 && tt < 1.0 && uu > 0.0 && uu < 1.0));
    }
    if (r.reward != 0.0) ++nonzero_rewards;
  }
  CHECK(nonzero_rewards <= 2);  // goal hits only; no puddle in this spec
}

TEST_CASE("point mass sparse reward") {
  SparsePointMassSpec spec;
  spec.lambda = 2.0;
  spec.max_episode_steps = 50;

  SUBCASE("reward once per episode, on first crossing") {
    PointMassState st = pointmass_reset(spec);
    PointMassStepResult r = pointmass_step(spec, st, vec2(1, 0));
    CHECK(r.reward == 0.0);
    r = pointmass_step(spec, r.state, vec2(1, 0));
    CHECK(r.reward == doctest::Approx(1.0));  // ||(2,0)|| = lambda
    r = pointmass_step(spec, r.state, vec2(-1, 0));
    CHECK(r.reward == 0.0);
    r = pointmass_step(spec, r.state, vec2(1, 0));  // crosses again
    CHECK(r.reward == 0.0);
  }
  SUBCASE("no crossing means zero return") {
    PointMassState st = pointmass_reset(spec);
    double total = 0.0;
    while (!st.done) {
      const PointMassStepResult r = pointmass_step(spec, st, vec2(0.01, 0));
      total += r.reward;
      st = r.state;
    }
    CHECK(total == 0.0);
  }
  SUBCASE("uniform walker first-reward time scales diffusively") {
    SparsePointMassSpec diff;
    diff.lambda = 10.0;
    diff.max_episode_steps = 5000;
    const ActionSpace space = ActionSpace::symmetric(2, 1.0);
    Rng rng(5);
    std::vector<int> first_times;
    for (int ep = 0; ep < 30; ++ep) {
      PointMassState st = pointmass_reset(diff);
      int t = 0;
      while (!st.done) {
        const PointMassStepResult r = pointmass_step(diff, st, space.uniform_point(rng));
        ++t;
        st = r.state;
        if (r.reward > 0.0) break;
      }
      first_times.push_back(t);
    }
    std::sort(first_times.begin(), first_times.end());
    const double median = first_times[first_times.size() / 2];
    CHECK(median >= diff.lambda * diff.lambda);  // >= lambda^2 steps
    CHECK(median < 5000);
  }
}

TEST_CASE("coverage measurement") {
  const NavSpec spec = make_open_box(400, 400);
  SUBCASE("empty trajectory") { CHECK(coverage({}, spec, 10.0) == 0.0); }
  SUBCASE("single point") {
    CHECK(coverage({{5.0, 5.0}}, spec, 10.0) == doctest::Approx(1.0 / 1600.0));
  }
  SUBCASE("space-filling sweep") {
    std::vector<Point2> traj;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) traj.push_back({i * 10.0 + 5.0, j * 10.0 + 5.0});
    CHECK(coverage(traj, spec, 10.0) == doctest::Approx(1.0));
  }
}
