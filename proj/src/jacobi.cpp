#include "mvd/jacobi.hpp"

#include <cmath>

namespace mvd {

namespace {

void guard_conjugate(double sk) {
  // poles sit at sqrt(kappa) = m pi, m >= 1; the kappa -> 0 limit is regular
  if (sk > 1.5 && std::abs(std::sin(sk)) < tol::conjugate_sin)
    throw ConjugatePointError("geodesic too close to a conjugate point");
}

double coeff_exp_base(double k, double) {
  if (k < 0) return std::cosh(std::sqrt(-k));
  if (k > 0) return std::cos(std::sqrt(k));
  return 1.0;
}

double coeff_exp_tangent(double k, double) {
  if (k < 0) {
    double s = std::sqrt(-k);
    return std::sinh(s) / s;
  }
  if (k > 0) {
    double s = std::sqrt(k);
    return std::sin(s) / s;
  }
  return 1.0;
}

double coeff_log_base(double k, double) {
  if (k < 0) {
    double s = std::sqrt(-k);
    return -s * std::cosh(s) / std::sinh(s);
  }
  if (k > 0) {
    double s = std::sqrt(k);
    guard_conjugate(s);
    return -s * std::cos(s) / std::sin(s);
  }
  return -1.0;
}

double coeff_log_arg(double k, double) {
  if (k < 0) {
    double s = std::sqrt(-k);
    return s / std::sinh(s);
  }
  if (k > 0) {
    double s = std::sqrt(k);
    guard_conjugate(s);
    return s / std::sin(s);
  }
  return 1.0;
}

double coeff_geo_x(double k, double tau) {
  if (k < 0) {
    double s = std::sqrt(-k);
    return std::sinh(s * (1.0 - tau)) / std::sinh(s);
  }
  if (k > 0) {
    double s = std::sqrt(k);
    guard_conjugate(s);
    return std::sin(s * (1.0 - tau)) / std::sin(s);
  }
  return 1.0 - tau;
}

double coeff_geo_y(double k, double tau) {
  if (k < 0) {
    double s = std::sqrt(-k);
    return std::sinh(s * tau) / std::sinh(s);
  }
  if (k > 0) {
    double s = std::sqrt(k);
    guard_conjugate(s);
    return std::sin(s * tau) / std::sin(s);
  }
  return tau;
}

using CoeffFn = double (*)(double, double);

// DF[in]  = sum_k <in, Xi_k(0)>_from alpha(kappa_k) Xi_k(T)
// DF*[in] = sum_k <in, Xi_k(T)>_dest alpha(kappa_k) Xi_k(0)
void frame_sum(const Manifold& m, CVec from, CVec dir, double T, CoeffFn coeff,
               double tau, CVec in, Vec out, bool adjoint) {
  const int d = m.dim();
  const int rep = m.rep_dim();
  if (m.key().kind == ManifoldKind::Circle) {
    // flat with trivial transport in the angle chart: a scalar multiple
    out = coeff(0.0, tau) * in;
    return;
  }
  JacobiFrame frame;
  m.jacobi_frame(from, dir, frame);

  MatrixXd basis_T(rep, d);
  VectorXd dest(rep);
  m.frame_at(frame, T, basis_T, dest);

  out.setZero();
  for (int k = 0; k < d; ++k) {
    double a = coeff(frame.kappa[k], tau);
    if (!adjoint) {
      out += m.inner(from, in, frame.basis.col(k)) * a * basis_T.col(k);
    } else {
      out += m.inner(dest, in, basis_T.col(k)) * a * frame.basis.col(k);
    }
  }
}

}  // namespace

namespace jac {

void exp_base(const Manifold& m, CVec x, CVec xi, CVec in, Vec out,
              bool adjoint) {
  frame_sum(m, x, xi, 1.0, coeff_exp_base, 0.0, in, out, adjoint);
}

void exp_tangent(const Manifold& m, CVec x, CVec xi, CVec in, Vec out,
                 bool adjoint) {
  frame_sum(m, x, xi, 1.0, coeff_exp_tangent, 0.0, in, out, adjoint);
}

void log_base(const Manifold& m, CVec x, CVec y, CVec in, Vec out,
              bool adjoint) {
  VectorXd dir(m.rep_dim());
  m.log(x, y, dir);
  frame_sum(m, x, dir, 0.0, coeff_log_base, 0.0, in, out, adjoint);
}

void log_arg(const Manifold& m, CVec x, CVec y, CVec in, Vec out,
             bool adjoint) {
  // the frame runs from the varying argument y toward the log base x
  VectorXd dir(m.rep_dim());
  m.log(y, x, dir);
  frame_sum(m, y, dir, 1.0, coeff_log_arg, 0.0, in, out, adjoint);
}

void geo_x(const Manifold& m, CVec x, CVec y, double tau, CVec in, Vec out,
           bool adjoint) {
  VectorXd dir(m.rep_dim());
  m.log(x, y, dir);
  frame_sum(m, x, dir, tau, coeff_geo_x, tau, in, out, adjoint);
}

void geo_y(const Manifold& m, CVec x, CVec y, double tau, CVec in, Vec out,
           bool adjoint) {
  // frame from the varying endpoint y; the image gamma(x,y;tau) sits at
  // parameter 1 - tau along it
  VectorXd dir(m.rep_dim());
  m.log(y, x, dir);
  frame_sum(m, y, dir, 1.0 - tau, coeff_geo_y, tau, in, out, adjoint);
}

}  // namespace jac

namespace {

TangentVector run_point_kind(const Manifold& m, DiffKind kind,
                             const ManifoldPoint& x, const ManifoldPoint& y,
                             double tau, const TangentVector& input,
                             bool adjoint) {
  VectorXd out(m.rep_dim());
  VectorXd image(m.rep_dim());
  switch (kind) {
    case DiffKind::LogInBase:
      jac::log_base(m, x.coords, y.coords, input.vec, out, adjoint);
      return {x, std::move(out)};
    case DiffKind::LogInArgument:
      jac::log_arg(m, x.coords, y.coords, input.vec, out, adjoint);
      if (adjoint) return {y, std::move(out)};
      return {x, std::move(out)};
    case DiffKind::GeodesicInX:
      jac::geo_x(m, x.coords, y.coords, tau, input.vec, out, adjoint);
      if (adjoint) return {x, std::move(out)};
      m.geodesic(x.coords, y.coords, tau, image);
      return {{std::move(image), m.key()}, std::move(out)};
    case DiffKind::GeodesicInY:
      jac::geo_y(m, x.coords, y.coords, tau, input.vec, out, adjoint);
      if (adjoint) return {y, std::move(out)};
      m.geodesic(x.coords, y.coords, tau, image);
      return {{std::move(image), m.key()}, std::move(out)};
    default:
      throw GeometryError("diff_map kind requires a tangent argument");
  }
}

TangentVector run_exp_kind(const Manifold& m, DiffKind kind,
                           const ManifoldPoint& x, const TangentVector& xi,
                           const TangentVector& input, bool adjoint) {
  VectorXd out(m.rep_dim());
  switch (kind) {
    case DiffKind::ExpInPoint:
      jac::exp_base(m, x.coords, xi.vec, input.vec, out, adjoint);
      break;
    case DiffKind::ExpInTangent:
      jac::exp_tangent(m, x.coords, xi.vec, input.vec, out, adjoint);
      break;
    default:
      throw GeometryError("diff_map kind requires a point argument");
  }
  if (adjoint) return {x, std::move(out)};
  VectorXd image(m.rep_dim());
  m.exp(x.coords, xi.vec, image);
  return {{std::move(image), m.key()}, std::move(out)};
}

}  // namespace

TangentVector diff_map(const Manifold& m, DiffKind kind, const ManifoldPoint& x,
                       const ManifoldPoint& y, double tau,
                       const TangentVector& input) {
  return run_point_kind(m, kind, x, y, tau, input, false);
}

TangentVector diff_map(const Manifold& m, DiffKind kind, const ManifoldPoint& x,
                       const TangentVector& xi, const TangentVector& input) {
  return run_exp_kind(m, kind, x, xi, input, false);
}

TangentVector adjoint_diff_map(const Manifold& m, DiffKind kind,
                               const ManifoldPoint& x, const ManifoldPoint& y,
                               double tau, const TangentVector& w) {
  return run_point_kind(m, kind, x, y, tau, w, true);
}

TangentVector adjoint_diff_map(const Manifold& m, DiffKind kind,
                               const ManifoldPoint& x, const TangentVector& xi,
                               const TangentVector& w) {
  return run_exp_kind(m, kind, x, xi, w, true);
}

}  // namespace mvd
