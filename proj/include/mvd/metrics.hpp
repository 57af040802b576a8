#pragma once

#include "mvd/image.hpp"

namespace mvd {

// mean squared geodesic error (1/N) sum dist^2(u_i, u0_i)
double mse(const ManifoldImage& u, const ManifoldImage& u0);

}  // namespace mvd
