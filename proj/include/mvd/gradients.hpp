#pragma once

#include "mvd/energies.hpp"

namespace mvd {

// Riemannian gradients of one model state, laid out like the state: one
// tangent matrix per image plus the optional field gradient.  Tangent k of
// pixel i of the field gradient occupies rows [k*rep, (k+1)*rep).
struct GradientBundle {
  std::vector<MatrixXd> images;
  std::optional<MatrixXd> xi;
};

// grad dist^2(., y)(x) = -2 log_x(y)
TangentVector grad_dist_sq(const Manifold& m, const ManifoldPoint& x,
                           const ManifoldPoint& y);
void grad_dist_sq(const Manifold& m, CVec x, CVec y, Vec out);

GradientBundle grad_energy(const State& state, const ManifoldImage& f,
                           const ModelConfig& cfg);

double bundle_norm_sq(const State& state, const GradientBundle& g);

// Per-pair TGV contributions: F1 = |log_{u_i} u_next - xi_i|^2 and
// F2 = |xi_i - P(xi_prev)|^2 with the pole ladder x -> y.
struct TgvF1Grads {
  VectorXd wrt_xi;      // at u_i
  VectorXd wrt_u;       // at u_i
  VectorXd wrt_u_next;  // at u_next
};
TgvF1Grads grad_tgv_f1(const Manifold& m, CVec u_i, CVec u_next, CVec xi_i);

struct TgvF2Grads {
  VectorXd wrt_xi;       // at u_i
  VectorXd wrt_xi_prev;  // at u_prev
  VectorXd wrt_u;        // at u_i
  VectorXd wrt_u_prev;   // at u_prev
};
TgvF2Grads grad_tgv_f2(const Manifold& m, CVec u_prev, CVec u_i, CVec xi_prev,
                       CVec xi_i);

}  // namespace mvd
