#include "polyrl/learner.hpp"

#include <cmath>
#include <limits>

#include "polyrl/log.hpp"

namespace polyrl {

TileCoder::TileCoder(int tilings, int tiles_per_dim, const Vec& low, const Vec& high,
                     int num_actions)
    : tilings_(tilings),
      tiles_per_dim_(tiles_per_dim),
      num_actions_(num_actions),
      low_(low),
      high_(high) {
  if (tilings < 1 || tiles_per_dim < 1 || num_actions < 1)
    throw std::invalid_argument("TileCoder: counts must be >= 1");
  if (low.size() != 2 || high.size() != 2)
    throw std::invalid_argument("TileCoder: expects a 2D state box");
  for (int i = 0; i < 2; ++i)
    if (!(low[i] < high[i])) throw std::invalid_argument("TileCoder: low must be < high");
  cell_size_ = (high_ - low_) / tiles_per_dim_;
  features_per_action_ = tilings_ * tiles_per_dim_ * tiles_per_dim_;
}

void TileCoder::active_features(const Vec& s, int a_idx, std::vector<int>& out) const {
  if (a_idx < 0 || a_idx >= num_actions_)
    throw std::invalid_argument("TileCoder: action index out of range");
  if (s.size() != 2) throw std::invalid_argument("TileCoder: expects 2D states");

  double x = s[0], y = s[1];
  if (x < low_[0] || x > high_[0] || y < low_[1] || y > high_[1]) {
    log(LogLevel::Debug, "TileCoder: clamping out-of-range state (%g, %g)", x, y);
    x = std::clamp(x, low_[0], high_[0]);
    y = std::clamp(y, low_[1], high_[1]);
  }

  out.resize(tilings_);
  const int cells = tiles_per_dim_ * tiles_per_dim_;
  for (int t = 0; t < tilings_; ++t) {
    // Each tiling is offset by t/tilings of one cell in both dimensions.
    const double off = static_cast<double>(t) / tilings_;
    int cx = static_cast<int>(std::floor((x - low_[0]) / cell_size_[0] + off));
    int cy = static_cast<int>(std::floor((y - low_[1]) / cell_size_[1] + off));
    cx = std::clamp(cx, 0, tiles_per_dim_ - 1);
    cy = std::clamp(cy, 0, tiles_per_dim_ - 1);
    out[t] = a_idx * features_per_action_ + t * cells + cy * tiles_per_dim_ + cx;
  }
}

LinearQ::LinearQ(TileCoder coder, double alpha, double gamma, double action_scale)
    : coder_(std::move(coder)),
      alpha_(alpha),
      gamma_(gamma),
      action_scale_(action_scale),
      weights_(coder_.total_features(), 0.0) {
  if (!(alpha > 0.0)) throw std::invalid_argument("LinearQ: alpha must be > 0");
  if (!(gamma >= 0.0) || !(gamma <= 1.0))
    throw std::invalid_argument("LinearQ: gamma must lie in [0, 1]");
}

double LinearQ::q_value(const Vec& s, int a_idx) const {
  coder_.active_features(s, a_idx, scratch_);
  double q = 0.0;
  for (int f : scratch_) q += weights_[f];
  return q;
}

int LinearQ::greedy_index(const Vec& s) const {
  int best = 0;
  double best_q = q_value(s, 0);
  for (int a = 1; a < coder_.num_actions(); ++a) {
    const double q = q_value(s, a);
    if (q > best_q) {
      best_q = q;
      best = a;
    }
  }
  return best;
}

Vec LinearQ::action_from_index(int a_idx) const {
  if (a_idx < 0 || a_idx >= coder_.num_actions())
    throw std::invalid_argument("LinearQ: action index out of range");
  const double angle = 2.0 * M_PI * a_idx / coder_.num_actions();
  Vec a(2);
  a[0] = action_scale_ * std::cos(angle);
  a[1] = action_scale_ * std::sin(angle);
  return a;
}

int LinearQ::nearest_index(const Vec& action) const {
  int best = 0;
  double best_dot = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < coder_.num_actions(); ++a) {
    const double dot = action_from_index(a).dot(action);
    if (dot > best_dot) {
      best_dot = dot;
      best = a;
    }
  }
  return best;
}

LinearQ::Choice LinearQ::epsilon_greedy(const Vec& s, double epsilon, Rng& rng) const {
  if (!(epsilon >= 0.0) || !(epsilon <= 1.0))
    throw std::invalid_argument("LinearQ: epsilon must lie in [0, 1]");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (u(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, coder_.num_actions() - 1);
    const int idx = pick(rng);
    return {idx, action_from_index(idx), false};
  }
  const int idx = greedy_index(s);
  return {idx, action_from_index(idx), true};
}

double LinearQ::td_update(const Vec& s, int a_idx, double reward, const Vec& s_next,
                          bool done) {
  double target = reward;
  if (!done) {
    double best_next = q_value(s_next, 0);
    for (int a = 1; a < coder_.num_actions(); ++a)
      best_next = std::max(best_next, q_value(s_next, a));
    target += gamma_ * best_next;
  }
  const double td_error = target - q_value(s, a_idx);
  if (!std::isfinite(td_error))
    throw LearnerDivergence("LinearQ: non-finite TD error");

  coder_.active_features(s, a_idx, scratch_);
  for (int f : scratch_) {
    weights_[f] += alpha_ * td_error;
    if (!std::isfinite(weights_[f]))
      throw LearnerDivergence("LinearQ: non-finite weight after update");
  }
  return td_error;
}

void LinearQ::set_weights(std::vector<double> w) {
  if (w.size() != weights_.size())
    throw std::invalid_argument("LinearQ: weight vector size mismatch");
  weights_ = std::move(w);
}

}  // namespace polyrl
