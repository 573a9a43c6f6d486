#pragma once

#include <optional>

#include "polyrl/rng.hpp"
#include "polyrl/vec.hpp"

namespace polyrl {

// Axis-aligned action box; low < high componentwise.
struct ActionSpace {
  Vec low, high;

  static ActionSpace symmetric(int dim, double m);

  int dim() const { return static_cast<int>(low.size()); }
  void validate() const;
  Vec uniform_point(Rng& rng) const;
  Vec clip(Vec v) const;
  bool contains(const Vec& v) const;
  double mean_half_width() const { return (high - low).mean() / 2.0; }
};

// Clamp window for the correlation angle; tan diverges at pi/2 and the
// construction degenerates at 0.
inline constexpr double kEtaMin = 1e-4;
inline const double kEtaMax = M_PI / 2.0 - 1e-3;

// Draw eta ~ N(theta, sigma^2), clamped into [kEtaMin, kEtaMax].
double sample_eta(double theta, double sigma_sq, Rng& rng);

struct SampledAction {
  Vec action;    // clipped to the box
  Vec pre_clip;  // at angle eta from prev, forward-biased
  bool clipped = false;
  bool fallback = false;
};

// Deterministic core of the action sampler for a given uniform draw P.
// Returns nullopt when the geometry degenerates (P orthogonal or collinear
// to prev) and a fresh P is needed.
std::optional<SampledAction> sample_action_from_point(const Vec& prev, double eta,
                                                      const Vec& point,
                                                      const ActionSpace& space);

// Next persistent action at angle eta from prev with uniform box draw for
// the azimuth; falls back to a uniform direction scaled to the mean box
// half-width when prev is degenerate or no usable draw is found.
SampledAction sample_action(const Vec& prev, double eta, const ActionSpace& space,
                            Rng& rng);

}  // namespace polyrl
