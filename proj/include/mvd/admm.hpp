#pragma once

#include <functional>

#include "mvd/energies.hpp"

namespace mvd {

struct AdmmParams {
  double penalty{1.0};  // augmented-Lagrangian weight
  long max_iter{500};
  double tol_primal{1e-6};
  double tol_dual{1e-6};
  int inner_iter{200};  // primal-dual budget of the convex block
  bool allow_spd{false};
};

struct AdmmReport {
  ManifoldImage z;  // feasible iterate, on the manifold after projection
  // embedded primal blocks: (v, w) for ext_ic; (u, xi) for ext_tgv;
  // (u) for ext_additive
  std::vector<MatrixXd> blocks;
  long iterations{0};
  bool converged{false};
  std::vector<double> best_feasible_trace;
  std::vector<double> primal_residual;
  std::vector<double> dual_residual;
  double max_membership_error{0};
  std::optional<double> mse;
};

using AdmmCallback =
    std::function<void(long iter, double best_feasible, double r, double s)>;

// Splits the euclidean model energy from the manifold constraint by
// duplication (z equal to the constrained combination) and alternates a
// warm-started primal-dual solve of the convex block, the pixelwise
// projection onto the manifold, and the dual update.
AdmmReport admm_extrinsic(const ManifoldImage& f, const ModelConfig& cfg,
                          const AdmmParams& params,
                          const AdmmCallback& cb = {});

MatrixXd embed_image(const ManifoldImage& u);
ManifoldImage project_embedded_image(std::shared_ptr<const Manifold> m,
                                     const PixelGrid& grid,
                                     const MatrixXd& embedded);

}  // namespace mvd
