#pragma once

#include <Eigen/Core>

#include "polyrl/rng.hpp"

namespace polyrl {

// Common currency for states, actions and bond vectors.
using Vec = Eigen::VectorXd;

// Uniform direction on the unit sphere S^(dim-1). dim = 1 gives a fair sign.
Vec unit_sphere_dir(int dim, Rng& rng);

// Cosine of the angle between two nonzero vectors.
double cosine_between(const Vec& a, const Vec& b);

}  // namespace polyrl
