#include "mvd/karcher.hpp"

namespace mvd {

VectorXd karcher_mean(const Manifold& m, const MatrixXd& points,
                      double tolerance, int max_iter) {
  const int n = static_cast<int>(points.cols());
  if (n == 0) throw GeometryError("Karcher mean of an empty set");
  VectorXd x = points.col(0);
  VectorXd lg(m.rep_dim()), step(m.rep_dim());
  for (int it = 0; it < max_iter; ++it) {
    step.setZero();
    for (int i = 0; i < n; ++i) {
      m.log(x, points.col(i), lg);
      step += lg;
    }
    step /= n;
    if (m.norm(x, step) < tolerance) break;
    VectorXd next(m.rep_dim());
    m.exp(x, step, next);
    x = next;
  }
  return x;
}

}  // namespace mvd
