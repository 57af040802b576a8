#include "mvd/metrics.hpp"

namespace mvd {

double mse(const ManifoldImage& u, const ManifoldImage& u0) {
  require_same_shape(u, u0, "mse");
  const Manifold& m = u.manifold();
  double total = 0;
  for (int i = 0; i < u.size(); ++i) {
    double d = m.dist(u.pixel(i), u0.pixel(i));
    total += d * d;
  }
  return total / u.size();
}

}  // namespace mvd
