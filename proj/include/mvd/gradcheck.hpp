#pragma once

#include <cstdint>

#include "mvd/descent.hpp"

namespace mvd {

struct GradCheckResult {
  int checked{0};
  int failed{0};
  double worst_rel_err{0};
};

// Directional finite-difference validation of grad_energy against the
// energy itself: for random unit directions eta through the state,
// (E(state + h eta) - E(state - h eta)) / 2h is compared with
// <grad, eta> at relative tolerance tol.  Point blocks move by exp, the
// tangent field moves linearly and is transported to the new base.
GradCheckResult gradient_fd_check(const State& state, const ManifoldImage& f,
                                  const ModelConfig& cfg, int directions,
                                  double h, double tol, std::uint64_t seed);

// Random state around f for one model (noisy enough to make every term
// active), used by the check harness and the CLI.
State random_check_state(Model model, const ManifoldImage& f,
                         std::uint64_t seed);

// Random image of the given shape, pixels clustered within `spread` of a
// random base point.
ManifoldImage random_image(std::shared_ptr<const Manifold> m, int n1, int n2,
                           double spread, std::uint64_t seed);

}  // namespace mvd
