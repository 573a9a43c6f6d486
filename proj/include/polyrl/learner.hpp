#pragma once

#include <stdexcept>
#include <vector>

#include "polyrl/rng.hpp"
#include "polyrl/vec.hpp"

namespace polyrl {

// Thrown when a TD update produces a non-finite error or weight.
struct LearnerDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sparse binary tile-coding features over a 2D state box, one weight block
// per discrete action. Exactly `tilings` features are active per query;
// out-of-range states are clamped into the box.
class TileCoder {
 public:
  TileCoder(int tilings, int tiles_per_dim, const Vec& low, const Vec& high,
            int num_actions);

  int tilings() const { return tilings_; }
  int num_actions() const { return num_actions_; }
  int total_features() const { return num_actions_ * features_per_action_; }

  // Writes exactly tilings() indices; all within [0, total_features()).
  void active_features(const Vec& s, int a_idx, std::vector<int>& out) const;

 private:
  int tilings_;
  int tiles_per_dim_;
  int num_actions_;
  int features_per_action_;
  Vec low_, high_;
  Vec cell_size_;
};

// Linear action-value function over a tile-coded feature map with K unit
// directions (scaled to the step length) as the discrete action set.
class LinearQ {
 public:
  LinearQ(TileCoder coder, double alpha, double gamma, double action_scale);

  double q_value(const Vec& s, int a_idx) const;
  int greedy_index(const Vec& s) const;  // ties broken by lowest index
  Vec action_from_index(int a_idx) const;
  Vec greedy_action(const Vec& s) const { return action_from_index(greedy_index(s)); }

  // Discrete direction closest (by dot product) to a continuous action.
  int nearest_index(const Vec& action) const;

  struct Choice {
    int index;
    Vec action;
    bool greedy;
  };
  Choice epsilon_greedy(const Vec& s, double epsilon, Rng& rng) const;

  // One-step Q-learning update; returns the TD error. Throws
  // LearnerDivergence when the error or any weight becomes non-finite.
  double td_update(const Vec& s, int a_idx, double reward, const Vec& s_next, bool done);

  int num_actions() const { return coder_.num_actions(); }
  const std::vector<double>& weights() const { return weights_; }
  void set_weights(std::vector<double> w);
  double alpha() const { return alpha_; }
  double gamma() const { return gamma_; }

 private:
  TileCoder coder_;
  double alpha_;
  double gamma_;
  double action_scale_;
  std::vector<double> weights_;
  mutable std::vector<int> scratch_;
};

}  // namespace polyrl
