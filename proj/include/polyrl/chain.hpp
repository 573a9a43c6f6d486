#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "polyrl/rng.hpp"
#include "polyrl/vec.hpp"

namespace polyrl {

// A trajectory of visited states; bonds are the displacements between
// consecutive states and are always derived from the states.
struct Chain {
  Eigen::MatrixXd states;  // dim x n_states, column per state

  int dim() const { return static_cast<int>(states.rows()); }
  int n_states() const { return static_cast<int>(states.cols()); }
  int n_bonds() const { return n_states() - 1; }

  // bond i (0-based) = states[i+1] - states[i]
  Vec bond(int i) const { return states.col(i + 1) - states.col(i); }
  Vec end_to_end() const { return states.col(n_states() - 1) - states.col(0); }
};

// Persistence number Lp = 1/|ln(cos theta)| for theta in (0, pi/2).
double persistence_number(double theta);

// Effective squared bond length b^2 = b0^2 (1+cos theta)/(1-cos theta),
// theta in (0, pi].
double effective_bond_length_sq(double theta, double b0);

// End-to-end expansion of a persistent walk over a plain random walk:
// (1 + e^{-1/lp}) / (1 - e^{-1/lp}), > 1 for all lp > 0.
double expansion_ratio(double lp);

// Radius of gyration squared of n >= 2 states (columns): mean squared
// distance from the center of mass, divided by n-1.
double gyration_squared_batch(const Eigen::MatrixXd& states);
double gyration_squared_batch(const std::vector<Vec>& states);

// Offset of the next state from the trajectory's center of mass, expressed
// in bond vectors: new_bond + (1/n) * sum_{i=1..n-1} i*bonds[i-1], where n
// is the state count of the existing trajectory (bonds.size() + 1).
Vec center_offset_via_bonds(const std::vector<Vec>& bonds, const Vec& new_bond);

// Incremental record of a growing trajectory segment: running center of
// mass, gyration radius squared, the position-weighted bond sum
// W = sum i*w_i, and bond length/angle statistics. Matches the batch
// gyration value at every step.
class GyrationTracker {
 public:
  explicit GyrationTracker(Vec seed_state);

  // Appends a state and returns the change in the gyration radius squared.
  double append(const Vec& s);

  int dim() const { return static_cast<int>(center_.size()); }
  int count() const { return count_; }
  double ug2() const { return ug2_; }
  const Vec& center() const { return center_; }
  const Vec& weighted_bond_sum() const { return weighted_bond_sum_; }
  double sum_bond_sq() const { return sum_bond_sq_; }
  double sum_cos() const { return sum_cos_; }
  int cos_pairs() const { return cos_pairs_; }
  const Vec& last_state() const { return last_state_; }
  bool has_last_bond() const { return last_bond_.has_value(); }
  const Vec& last_bond() const { return *last_bond_; }

  // Mean squared bond length over the segment; 0 until a bond exists.
  double mean_bond_sq() const {
    return count_ < 2 ? 0.0 : sum_bond_sq_ / (count_ - 1);
  }
  // Mean consecutive-bond cosine; NaN when no non-degenerate pair exists.
  double mean_cos() const;
  // Cosine of the latest consecutive bond pair; NaN if absent/degenerate.
  double last_pair_cos() const { return last_pair_cos_; }

 private:
  int count_;
  Vec center_;
  double ug2_ = 0.0;
  Vec weighted_bond_sum_;
  double sum_bond_sq_ = 0.0;
  double sum_cos_ = 0.0;
  int cos_pairs_ = 0;
  Vec last_state_;
  std::optional<Vec> last_bond_;
  double last_pair_cos_;
};

// Freely-jointed chain: n_bonds i.i.d. uniformly oriented bonds of length
// b0, starting at the origin.
Chain generate_fjc(int dim, int n_bonds, double b0, Rng& rng);

// Freely-rotating chain: every bond at the fixed angle theta from its
// predecessor, azimuth uniform in the orthogonal complement (fair sign in
// 2D); first bond uniform on the sphere. Requires dim >= 2.
Chain generate_frc(int dim, int n_bonds, double b0, double theta, Rng& rng);

struct EnsembleStats {
  std::vector<double> corr;     // C(k), k = 0..max_lag
  std::vector<double> corr_se;  // MC standard error per lag
  double mean_bond_sq = 0.0;
  double mean_end_to_end_sq = 0.0;
  double end_to_end_sq_se = 0.0;
  double mean_end_to_end = 0.0;
  double end_to_end_se = 0.0;
  double mean_gyration_sq = 0.0;
  double gyration_sq_se = 0.0;
  double mean_gyration = 0.0;
  double gyration_se = 0.0;
  long n_chains = 0;
};

// Streaming ensemble-average accumulator so large campaigns never hold the
// whole ensemble in memory. All chains must share dimension and length.
class EnsembleAccumulator {
 public:
  explicit EnsembleAccumulator(int max_lag);
  void add(const Chain& chain);
  EnsembleStats finish() const;

 private:
  int max_lag_;
  int n_bonds_ = -1;
  long n_chains_ = 0;
  std::vector<double> lag_sum_, lag_sq_sum_;  // per-chain means, accumulated
  double bond_sq_sum_ = 0.0;
  double e2e_sq_sum_ = 0.0, e2e_sq_sq_sum_ = 0.0;
  double e2e_sum_ = 0.0, e2e_sq2_sum_ = 0.0;
  double gyr_sq_sum_ = 0.0, gyr_sq_sq_sum_ = 0.0;
  double gyr_sum_ = 0.0, gyr_sq2_sum_ = 0.0;
};

// Correlation function C(k) = E[w_i . w_{i+k}] / E[||w||^2] plus end-to-end
// and gyration averages over an ensemble of equal-length chains.
EnsembleStats ensemble_stats(const std::vector<Chain>& chains, int max_lag);

}  // namespace polyrl
