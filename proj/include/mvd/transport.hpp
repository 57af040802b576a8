#pragma once

#include "mvd/manifold.hpp"

namespace mvd {

enum class LadderScheme { Pole, Schild, ClosedForm };

// Intermediate points of one pole ladder evaluation, reused by the
// adjoint chains of the TGV gradient.
struct PoleLadderEval {
  VectorXd e;     // exp_x(xi)
  VectorXd c;     // gamma(x, y; 1/2)
  VectorXd p;     // gamma(e, c; 2)
  VectorXd zeta;  // transported vector at y
};

// zeta = -log_y(gamma(exp_x(xi), gamma(x, y; 1/2); 2)); exact parallel
// transport on symmetric manifolds.
PoleLadderEval pole_ladder_eval(const Manifold& m, CVec x, CVec y, CVec xi);
void pole_ladder(const Manifold& m, CVec x, CVec y, CVec xi, Vec out);

// log_y(gamma(x, gamma(y, exp_x(xi); 1/2); 2)); first-order accurate.
void schild_ladder(const Manifold& m, CVec x, CVec y, CVec xi, Vec out);

void transport_by(const Manifold& m, LadderScheme scheme, CVec x, CVec y,
                  CVec xi, Vec out);

// Adjoint-chain contributions of w (a tangent at y) through the pole
// ladder x -> y of xi, with respect to each of its three inputs.  These are
// the bracketed compositions used by the second-order TGV gradient.
struct PoleLadderAdjoints {
  VectorXd wrt_xi;  // at x
  VectorXd wrt_x;   // at x
  VectorXd wrt_y;   // at y
};

PoleLadderAdjoints pole_ladder_differentials(const Manifold& m, CVec x, CVec y,
                                             CVec xi, const PoleLadderEval& ev,
                                             CVec w);

enum class LadderInput { XiPrev, XPoint, YPoint };

// Single-chain convenience wrapper over pole_ladder_differentials.
TangentVector pole_ladder_differential(const Manifold& m,
                                       const ManifoldPoint& x,
                                       const ManifoldPoint& y,
                                       const TangentVector& xi,
                                       LadderInput wrt, const TangentVector& w);

}  // namespace mvd
