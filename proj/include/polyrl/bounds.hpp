#pragma once

namespace polyrl {

// Inputs to the gyration-change sensitivity bounds. n_states counts the
// states of the current segment (so it has n_states - 1 bonds);
// weighted_bond_sum_norm_sq is ||sum i*w_i||^2 over those bonds.
struct BoundInputs {
  int n_states;                      // >= 3
  double ug2;                        // >= 0
  double weighted_bond_sum_norm_sq;  // >= 0
  double b0_sq;                      // > 0, mean squared bond length
  double lp;                         // > 0, persistence number estimate
  double delta;                      // in (0, 1)
};

inline constexpr double kDeltaMin = 1e-6;
inline constexpr double kDeltaMax = 1.0 - 1e-6;

// Clamp a schedule value into the open interval the bounds accept.
double clamp_delta(double delta);

// Lambda(T, tau) = -ug2 / (n_states - 1); always <= 0.
double lambda_term(const BoundInputs& in);

// Gamma(T, b0, tau) = b0^2/n + ||sum i*w_i||^2 / n^3; always > 0.
double gamma_term(const BoundInputs& in);

// High-probability upper bound on the gyration change:
//   Lambda + (1/delta) [Gamma + (2 b0^2/n^2) sum_{i=1}^{n-1} i e^{-(n-i)/lp}]
double upper_bound(const BoundInputs& in);

// High-probability lower bound:
//   Lambda + (1 - sqrt(2-2 delta)) [Gamma + ((n-1)(n-2)/n^2) b0^2 e^{-(n-1)/lp}]
double lower_bound(const BoundInputs& in);

// Exploration-factor schedule delta = 1 - e^{-beta * episode}.
double delta_schedule(double beta, int episode);

}  // namespace polyrl
