#include "polyrl/vec.hpp"

#include <stdexcept>

namespace polyrl {

Vec unit_sphere_dir(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("unit_sphere_dir: dim must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(dim);
  while (true) {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

double cosine_between(const Vec& a, const Vec& b) {
  return a.dot(b) / (a.norm() * b.norm());
}

}  // namespace polyrl
