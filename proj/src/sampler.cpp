#include "polyrl/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyrl {

namespace {
constexpr int kMaxResamples = 16;
constexpr double kPrevNormFloor = 1e-9;
constexpr double kRejectionNormFloor = 1e-12;
}  // namespace

ActionSpace ActionSpace::symmetric(int dim, double m) {
  ActionSpace s;
  s.low = Vec::Constant(dim, -m);
  s.high = Vec::Constant(dim, m);
  s.validate();
  return s;
}

void ActionSpace::validate() const {
  if (low.size() != high.size() || low.size() < 1)
    throw std::invalid_argument("ActionSpace: low/high dimension mismatch");
  for (int i = 0; i < dim(); ++i)
    if (!(low[i] < high[i]))
      throw std::invalid_argument("ActionSpace: low must be < high componentwise");
}

Vec ActionSpace::uniform_point(Rng& rng) const {
  Vec p(dim());
  for (int i = 0; i < dim(); ++i) {
    std::uniform_real_distribution<double> u(low[i], high[i]);
    p[i] = u(rng);
  }
  return p;
}

Vec ActionSpace::clip(Vec v) const {
  return v.cwiseMax(low).cwiseMin(high);
}

bool ActionSpace::contains(const Vec& v) const {
  return (v.array() >= low.array()).all() && (v.array() <= high.array()).all();
}

double sample_eta(double theta, double sigma_sq, Rng& rng) {
  double eta = theta;
  if (sigma_sq > 0.0) {
    std::normal_distribution<double> normal(theta, std::sqrt(sigma_sq));
    eta = normal(rng);
  }
  return std::clamp(eta, kEtaMin, kEtaMax);
}

std::optional<SampledAction> sample_action_from_point(const Vec& prev, double eta,
                                                      const Vec& point,
                                                      const ActionSpace& space) {
  const double d = prev.dot(point);
  if (d == 0.0) return std::nullopt;

  const Vec vp = (d / prev.squaredNorm()) * prev;
  const Vec vr = point - vp;
  const double vr_norm = vr.norm();
  if (vr_norm < kRejectionNormFloor) return std::nullopt;

  const double l = vp.norm() * std::tan(eta);
  const double k = l / vr_norm;
  const Vec q = k * vr + vp;

  SampledAction out;
  out.pre_clip = d > 0.0 ? q : -q;
  out.action = space.clip(out.pre_clip);
  out.clipped = !space.contains(out.pre_clip);
  return out;
}

namespace {
SampledAction uniform_fallback(const ActionSpace& space, Rng& rng) {
  SampledAction out;
  out.pre_clip = space.mean_half_width() * unit_sphere_dir(space.dim(), rng);
  out.action = space.clip(out.pre_clip);
  out.clipped = !space.contains(out.pre_clip);
  out.fallback = true;
  return out;
}
}  // namespace

SampledAction sample_action(const Vec& prev, double eta, const ActionSpace& space,
                            Rng& rng) {
  if (prev.size() != space.dim())
    throw std::invalid_argument("sample_action: prev/space dimension mismatch");
  if (prev.norm() <= kPrevNormFloor) return uniform_fallback(space, rng);

  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const Vec point = space.uniform_point(rng);
    if (auto result = sample_action_from_point(prev, eta, point, space)) return *result;
  }
  return uniform_fallback(space, rng);
}

}  // namespace polyrl
