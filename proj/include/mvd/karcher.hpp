#pragma once

#include "mvd/manifold.hpp"

namespace mvd {

// Riemannian center of mass by fixed-point iteration
// x <- exp_x(mean of log_x(data)); tolerance on the mean-tangent norm.
VectorXd karcher_mean(const Manifold& m, const MatrixXd& points,
                      double tolerance = 1e-10, int max_iter = 100);

}  // namespace mvd
