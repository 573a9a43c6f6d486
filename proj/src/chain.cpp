#include "polyrl/chain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace polyrl {

namespace {
constexpr double kZeroBondNormSq = 1e-24;  // bonds below 1e-12 in norm are degenerate
const double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double persistence_number(double theta) {
  if (!(theta > 0.0) || !(theta < M_PI / 2.0))
    throw std::domain_error("persistence_number: theta must lie in (0, pi/2)");
  return 1.0 / std::fabs(std::log(std::cos(theta)));
}

double effective_bond_length_sq(double theta, double b0) {
  if (!(b0 > 0.0)) throw std::domain_error("effective_bond_length_sq: b0 must be > 0");
  if (!(theta > 0.0) || !(theta <= M_PI))
    throw std::domain_error("effective_bond_length_sq: theta must lie in (0, pi]");
  const double c = std::cos(theta);
  return b0 * b0 * (1.0 + c) / (1.0 - c);
}

double expansion_ratio(double lp) {
  if (!(lp > 0.0)) throw std::domain_error("expansion_ratio: lp must be > 0");
  const double q = std::exp(-1.0 / lp);
  return (1.0 + q) / (1.0 - q);
}

double gyration_squared_batch(const Eigen::MatrixXd& states) {
  const auto n = states.cols();
  if (n < 2) throw std::invalid_argument("gyration_squared_batch: need at least 2 states");
  const Vec center = states.rowwise().mean();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) sum += (states.col(i) - center).squaredNorm();
  return sum / static_cast<double>(n - 1);
}

double gyration_squared_batch(const std::vector<Vec>& states) {
  if (states.size() < 2)
    throw std::invalid_argument("gyration_squared_batch: need at least 2 states");
  Eigen::MatrixXd m(states[0].size(), static_cast<Eigen::Index>(states.size()));
  for (size_t i = 0; i < states.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = states[i];
  return gyration_squared_batch(m);
}

Vec center_offset_via_bonds(const std::vector<Vec>& bonds, const Vec& new_bond) {
  if (bonds.empty())
    throw std::invalid_argument("center_offset_via_bonds: bond list must be non-empty");
  const double n = static_cast<double>(bonds.size() + 1);
  Vec weighted = Vec::Zero(new_bond.size());
  for (size_t i = 0; i < bonds.size(); ++i) {
    if (bonds[i].size() != new_bond.size())
      throw std::invalid_argument("center_offset_via_bonds: dimension mismatch");
    weighted += static_cast<double>(i + 1) * bonds[i];
  }
  return new_bond + weighted / n;
}

GyrationTracker::GyrationTracker(Vec seed_state)
    : count_(1),
      center_(seed_state),
      weighted_bond_sum_(Vec::Zero(seed_state.size())),
      last_state_(std::move(seed_state)),
      last_pair_cos_(kNaN) {}

double GyrationTracker::append(const Vec& s) {
  if (s.size() != center_.size())
    throw std::invalid_argument("GyrationTracker::append: dimension mismatch");

  const Vec bond = s - last_state_;
  const double bond_sq = bond.squaredNorm();

  // Incremental gyration update; every term is non-negative, so no
  // cancellation can drive ug2 below zero.
  const int n = count_ + 1;
  const double ug2_new = (static_cast<double>(n - 2) / (n - 1)) * ug2_ +
                         (s - center_).squaredNorm() / n;
  const double delta = ug2_new - ug2_;
  ug2_ = ug2_new;

  center_ += (s - center_) / n;
  weighted_bond_sum_ += static_cast<double>(count_) * bond;  // bond index = old count
  sum_bond_sq_ += bond_sq;

  last_pair_cos_ = kNaN;
  if (last_bond_.has_value()) {
    const double prev_sq = last_bond_->squaredNorm();
    if (prev_sq > kZeroBondNormSq && bond_sq > kZeroBondNormSq) {
      last_pair_cos_ = last_bond_->dot(bond) / std::sqrt(prev_sq * bond_sq);
      sum_cos_ += last_pair_cos_;
      ++cos_pairs_;
    }
  }
  last_bond_ = bond;
  last_state_ = s;
  count_ = n;
  return delta;
}

double GyrationTracker::mean_cos() const {
  return cos_pairs_ == 0 ? kNaN : sum_cos_ / cos_pairs_;
}

Chain generate_fjc(int dim, int n_bonds, double b0, Rng& rng) {
  if (dim < 1 || n_bonds < 1 || !(b0 > 0.0))
    throw std::invalid_argument("generate_fjc: invalid parameters");
  Chain chain;
  chain.states.setZero(dim, n_bonds + 1);
  for (int i = 0; i < n_bonds; ++i)
    chain.states.col(i + 1) = chain.states.col(i) + b0 * unit_sphere_dir(dim, rng);
  return chain;
}

Chain generate_frc(int dim, int n_bonds, double b0, double theta, Rng& rng) {
  if (dim < 2)
    throw std::invalid_argument("generate_frc: dim must be >= 2 (no rotation freedom in 1D)");
  if (n_bonds < 1 || !(b0 > 0.0) || !(theta > 0.0) || !(theta < M_PI / 2.0))
    throw std::invalid_argument("generate_frc: invalid parameters");

  const double c = std::cos(theta);
  const double s = std::sin(theta);

  Chain chain;
  chain.states.setZero(dim, n_bonds + 1);
  Vec dir = unit_sphere_dir(dim, rng);
  chain.states.col(1) = b0 * dir;

  std::bernoulli_distribution coin(0.5);
  for (int i = 1; i < n_bonds; ++i) {
    Vec next(dim);
    if (dim == 2) {
      const double sgn = coin(rng) ? 1.0 : -1.0;
      next[0] = c * dir[0] - sgn * s * dir[1];
      next[1] = sgn * s * dir[0] + c * dir[1];
    } else {
      // Uniform azimuth: orthonormalize a random direction against dir.
      Vec perp(dim);
      while (true) {
        perp = unit_sphere_dir(dim, rng);
        perp -= perp.dot(dir) * dir;
        const double norm = perp.norm();
        if (norm > 1e-9) {
          perp /= norm;
          break;
        }
      }
      next = c * dir + s * perp;
    }
    dir = next;
    chain.states.col(i + 1) = chain.states.col(i) + b0 * dir;
  }
  return chain;
}

EnsembleAccumulator::EnsembleAccumulator(int max_lag) : max_lag_(max_lag) {
  if (max_lag < 0) throw std::invalid_argument("EnsembleAccumulator: max_lag must be >= 0");
  lag_sum_.assign(max_lag_ + 1, 0.0);
  lag_sq_sum_.assign(max_lag_ + 1, 0.0);
}

void EnsembleAccumulator::add(const Chain& chain) {
  const int nb = chain.n_bonds();
  if (n_bonds_ < 0) {
    if (max_lag_ >= nb)
      throw std::invalid_argument("EnsembleAccumulator: max_lag must be < chain length");
    n_bonds_ = nb;
  } else if (nb != n_bonds_) {
    throw std::invalid_argument("EnsembleAccumulator: chains must share a common length");
  }

  Eigen::MatrixXd bonds =
      chain.states.rightCols(nb) - chain.states.leftCols(nb);

  double bond_sq = 0.0;
  for (int i = 0; i < nb; ++i) bond_sq += bonds.col(i).squaredNorm();
  bond_sq_sum_ += bond_sq / nb;

  for (int k = 0; k <= max_lag_; ++k) {
    double dot_sum = 0.0;
    const int pairs = nb - k;
    for (int i = 0; i < pairs; ++i) dot_sum += bonds.col(i).dot(bonds.col(i + k));
    const double mean = dot_sum / pairs;
    lag_sum_[k] += mean;
    lag_sq_sum_[k] += mean * mean;
  }

  const double e2e_sq = chain.end_to_end().squaredNorm();
  const double e2e = std::sqrt(e2e_sq);
  e2e_sq_sum_ += e2e_sq;
  e2e_sq_sq_sum_ += e2e_sq * e2e_sq;
  e2e_sum_ += e2e;
  e2e_sq2_sum_ += e2e * e2e;

  const double g2 = gyration_squared_batch(chain.states);
  const double g = std::sqrt(g2);
  gyr_sq_sum_ += g2;
  gyr_sq_sq_sum_ += g2 * g2;
  gyr_sum_ += g;
  gyr_sq2_sum_ += g * g;

  ++n_chains_;
}

namespace {
// Standard error of the mean from accumulated sum and sum of squares.
double se_of_mean(double sum, double sq_sum, long n) {
  if (n < 2) return 0.0;
  const double mean = sum / n;
  const double var = std::max(0.0, sq_sum / n - mean * mean) * n / (n - 1);
  return std::sqrt(var / n);
}
}  // namespace

EnsembleStats EnsembleAccumulator::finish() const {
  if (n_chains_ == 0) throw std::invalid_argument("EnsembleAccumulator: empty ensemble");
  EnsembleStats st;
  st.n_chains = n_chains_;
  st.mean_bond_sq = bond_sq_sum_ / n_chains_;
  st.corr.resize(max_lag_ + 1);
  st.corr_se.resize(max_lag_ + 1);
  for (int k = 0; k <= max_lag_; ++k) {
    st.corr[k] = (lag_sum_[k] / n_chains_) / st.mean_bond_sq;
    st.corr_se[k] = se_of_mean(lag_sum_[k], lag_sq_sum_[k], n_chains_) / st.mean_bond_sq;
  }
  st.mean_end_to_end_sq = e2e_sq_sum_ / n_chains_;
  st.end_to_end_sq_se = se_of_mean(e2e_sq_sum_, e2e_sq_sq_sum_, n_chains_);
  st.mean_end_to_end = e2e_sum_ / n_chains_;
  st.end_to_end_se = se_of_mean(e2e_sum_, e2e_sq2_sum_, n_chains_);
  st.mean_gyration_sq = gyr_sq_sum_ / n_chains_;
  st.gyration_sq_se = se_of_mean(gyr_sq_sum_, gyr_sq_sq_sum_, n_chains_);
  st.mean_gyration = gyr_sum_ / n_chains_;
  st.gyration_se = se_of_mean(gyr_sum_, gyr_sq2_sum_, n_chains_);
  return st;
}

EnsembleStats ensemble_stats(const std::vector<Chain>& chains, int max_lag) {
  if (chains.empty()) throw std::invalid_argument("ensemble_stats: empty ensemble");
  EnsembleAccumulator acc(max_lag);
  for (const Chain& c : chains) acc.add(c);
  return acc.finish();
}

}  // namespace polyrl
