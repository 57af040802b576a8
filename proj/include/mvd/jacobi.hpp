#pragma once

#include "mvd/manifold.hpp"

namespace mvd {

// Differentials of exp, log and geodesic evaluation maps on symmetric
// manifolds, realized through a curvature-diagonalizing frame: the image of
// a tangent vector is the frame-coefficient sum with coefficient maps
// alpha(kappa) depending on which argument varies.  Each map is linear and
// comes with its metric adjoint.
enum class DiffKind {
  ExpInPoint,     // x -> exp_x(xi), xi moved by parallel transport
  ExpInTangent,   // xi -> exp_x(xi)
  LogInBase,      // x -> log_x(y)
  LogInArgument,  // y -> log_x(y)
  GeodesicInX,    // x -> gamma(x, y; tau)
  GeodesicInY     // y -> gamma(x, y; tau)
};

namespace jac {

// Raw kernels; `in` is a tangent at the varying argument, `out` a tangent at
// the image point (at x itself for LogInBase, at x for LogInArgument).
// Adjoints run the same frames backwards.
void exp_base(const Manifold& m, CVec x, CVec xi, CVec in, Vec out,
              bool adjoint);
void exp_tangent(const Manifold& m, CVec x, CVec xi, CVec in, Vec out,
                 bool adjoint);
void log_base(const Manifold& m, CVec x, CVec y, CVec in, Vec out,
              bool adjoint);
void log_arg(const Manifold& m, CVec x, CVec y, CVec in, Vec out,
             bool adjoint);
void geo_x(const Manifold& m, CVec x, CVec y, double tau, CVec in, Vec out,
           bool adjoint);
void geo_y(const Manifold& m, CVec x, CVec y, double tau, CVec in, Vec out,
           bool adjoint);

}  // namespace jac

// Checked wrappers.  The exp kinds take the geodesic as (x, xi), the other
// kinds as (x, y) plus tau for the geodesic kinds.
TangentVector diff_map(const Manifold& m, DiffKind kind, const ManifoldPoint& x,
                       const ManifoldPoint& y, double tau,
                       const TangentVector& input);
TangentVector diff_map(const Manifold& m, DiffKind kind, const ManifoldPoint& x,
                       const TangentVector& xi, const TangentVector& input);
TangentVector adjoint_diff_map(const Manifold& m, DiffKind kind,
                               const ManifoldPoint& x, const ManifoldPoint& y,
                               double tau, const TangentVector& w);
TangentVector adjoint_diff_map(const Manifold& m, DiffKind kind,
                               const ManifoldPoint& x, const TangentVector& xi,
                               const TangentVector& w);

}  // namespace mvd
