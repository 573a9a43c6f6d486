#include "polyrl/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyrl {

namespace {
void check_common(const BoundInputs& in) {
  if (in.n_states < 3) throw std::domain_error("bounds: n_states must be >= 3");
  if (!(in.ug2 >= 0.0)) throw std::domain_error("bounds: ug2 must be >= 0");
  if (!(in.weighted_bond_sum_norm_sq >= 0.0))
    throw std::domain_error("bounds: weighted bond sum norm must be >= 0");
  if (!(in.b0_sq > 0.0)) throw std::domain_error("bounds: b0_sq must be > 0");
  if (!(in.lp > 0.0)) throw std::domain_error("bounds: lp must be > 0");
  if (!(in.delta > 0.0) || !(in.delta < 1.0))
    throw std::domain_error("bounds: delta must lie in (0, 1)");
}
}  // namespace

double clamp_delta(double delta) { return std::clamp(delta, kDeltaMin, kDeltaMax); }

double lambda_term(const BoundInputs& in) {
  if (in.n_states < 2) throw std::domain_error("lambda_term: n_states must be >= 2");
  if (!(in.ug2 >= 0.0)) throw std::domain_error("lambda_term: ug2 must be >= 0");
  return -in.ug2 / (in.n_states - 1);
}

double gamma_term(const BoundInputs& in) {
  if (in.n_states < 1) throw std::domain_error("gamma_term: n_states must be >= 1");
  if (!(in.b0_sq > 0.0)) throw std::domain_error("gamma_term: b0_sq must be > 0");
  const double n = in.n_states;
  return in.b0_sq / n + in.weighted_bond_sum_norm_sq / (n * n * n);
}

double upper_bound(const BoundInputs& in) {
  check_common(in);
  const double n = in.n_states;
  double exp_sum = 0.0;
  for (int i = 1; i < in.n_states; ++i)
    exp_sum += i * std::exp(-(n - i) / in.lp);
  const double bracket = gamma_term(in) + (2.0 * in.b0_sq / (n * n)) * exp_sum;
  return lambda_term(in) + bracket / in.delta;
}

double lower_bound(const BoundInputs& in) {
  check_common(in);
  const double n = in.n_states;
  const double bracket =
      gamma_term(in) +
      ((n - 1.0) * (n - 2.0) / (n * n)) * in.b0_sq * std::exp(-(n - 1.0) / in.lp);
  return lambda_term(in) + (1.0 - std::sqrt(2.0 - 2.0 * in.delta)) * bracket;
}

double delta_schedule(double beta, int episode) {
  if (!(beta > 0.0) || !(beta < 1.0))
    throw std::domain_error("delta_schedule: beta must lie in (0, 1)");
  if (episode < 0) throw std::domain_error("delta_schedule: episode must be >= 0");
  return 1.0 - std::exp(-beta * episode);
}

}  // namespace polyrl
