#pragma once

#include <functional>

#include "mvd/gradients.hpp"

namespace mvd {

struct DescentParams {
  double sigma{1.0};      // initial step
  double rho{0.5};        // backtracking factor
  double c{1e-4};         // Armijo constant
  double delta_stop{1e-8};
  long max_iter{100000};
  int log_every{1};
};

enum class StopReason { MaxChange, MaxIter };

struct SolverReport {
  State final_state;
  long iterations{0};
  StopReason stop_reason{StopReason::MaxIter};
  std::vector<double> energy_trace;      // initial value plus accepted steps
  std::vector<double> max_change_trace;  // per accepted step
  // per accepted step, for post-hoc verification of the Armijo inequality
  std::vector<double> accepted_steps;     // sigma * rho^l
  std::vector<double> grad_norm_sq_trace;
  bool line_search_stall{false};
  std::optional<double> mse;
};

using ProgressCallback =
    std::function<void(long iter, double energy, double max_change)>;

// Armijo-backtracked Riemannian gradient descent on the product manifold
// of all state images.
SolverReport gradient_descent(State init, const ManifoldImage& f,
                              const ModelConfig& cfg,
                              const DescentParams& params,
                              const ProgressCallback& cb = {});

// Joint descent over the image and its tangent field: the point moves by
// exp, the field by a linear step followed by transport to the new base.
SolverReport gradient_descent_tangent_bundle(State init,
                                             const ManifoldImage& f,
                                             const ModelConfig& cfg,
                                             const DescentParams& params,
                                             const ProgressCallback& cb = {});

// Dispatch on the model kind (tangent-bundle algorithm for tgv_pole).
SolverReport solve_intrinsic(State init, const ManifoldImage& f,
                             const ModelConfig& cfg,
                             const DescentParams& params,
                             const ProgressCallback& cb = {});

// Default descent parameters per the experiment settings: signals get the
// tighter threshold and larger iteration budget.
DescentParams default_params(const ManifoldImage& f);

}  // namespace mvd
