#include <cmath>

#include "mvd/manifolds.hpp"

namespace mvd {

namespace {

double clamp_unit(double t) { return std::min(1.0, std::max(-1.0, t)); }

// Orthonormal complement of the columns of A in R^n (deterministic
// Householder construction).
MatrixXd orthonormal_complement(const MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  const int k = static_cast<int>(A.cols());
  Eigen::HouseholderQR<MatrixXd> qr(A);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, n);
  return Q.rightCols(n - k);
}

}  // namespace

SphereManifold::SphereManifold(int d) : d_(d) {
  if (d < 1) throw GeometryError("sphere dimension must be >= 1");
}

double SphereManifold::dist(CVec x, CVec y) const {
  // chord-based arc length; well conditioned at both ends of [0, pi]
  double chord = (x - y).norm();
  double anti = (x + y).norm();
  if (chord <= anti) return 2.0 * std::asin(clamp_unit(0.5 * chord));
  return M_PI - 2.0 * std::asin(clamp_unit(0.5 * anti));
}

void SphereManifold::exp(CVec x, CVec v, Vec out) const {
  double len = v.norm();
  if (len < 1e-14) {
    out = x + v;
  } else {
    out = std::cos(len) * x + (std::sin(len) / len) * v;
  }
  out /= out.norm();
}

void SphereManifold::log(CVec x, CVec y, Vec out) const {
  if ((y + x).norm() < tol::cut_locus)
    throw CutLocusError("antipodal points on S^" + std::to_string(d_));
  double c = clamp_unit(x.dot(y));
  double d = dist(x, y);
  out = y - c * x;
  double w = out.norm();
  if (w < 1e-14 || d < 1e-14) {
    // y - <x,y>x already is the first-order logarithm near x
    return;
  }
  out *= d / w;
}

double SphereManifold::inner(CVec, CVec u, CVec v) const { return u.dot(v); }

void SphereManifold::transport_along(CVec x, CVec dir, double T, CVec v,
                                     Vec out) const {
  double len = dir.norm();
  if (len < 1e-14) {
    out = v;
    return;
  }
  VectorXd u = dir / len;
  double a = v.dot(u);
  double t = T * len;
  out = v - a * u + a * (std::cos(t) * u - std::sin(t) * x);
}

void SphereManifold::jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const {
  frame.manifold = key();
  frame.base = x;
  frame.direction = dir;
  double len = dir.norm();
  frame.speed = len;
  frame.basis.resize(d_ + 1, d_);
  frame.kappa.resize(d_);
  if (len < 1e-14) {
    // degenerate geodesic: any orthonormal basis, flat coefficients
    tangent_basis(x, frame.basis);
    frame.kappa.setZero();
    return;
  }
  frame.basis.col(0) = dir / len;
  frame.kappa[0] = 0.0;
  if (d_ > 1) {
    MatrixXd span(d_ + 1, 2);
    span.col(0) = x;
    span.col(1) = frame.basis.col(0);
    frame.basis.rightCols(d_ - 1) = orthonormal_complement(span);
    frame.kappa.tail(d_ - 1).setConstant(len * len);
  }
}

void SphereManifold::frame_at(const JacobiFrame& frame, double T,
                              MatrixXd& basis_T, Vec dest) const {
  double len = frame.direction.norm();
  if (len < 1e-14) {
    basis_T = frame.basis;
    dest = frame.base;
    return;
  }
  VectorXd u = frame.direction / len;
  double c = std::cos(T * len), s = std::sin(T * len);
  basis_T = frame.basis;
  for (int k = 0; k < basis_T.cols(); ++k) {
    double a = basis_T.col(k).dot(u);
    if (a != 0.0)
      basis_T.col(k) += a * ((c - 1.0) * u - s * frame.base);
  }
  dest = c * frame.base + s * u;
  dest /= dest.norm();
}

void SphereManifold::tangent_basis(CVec x, MatrixXd& basis) const {
  basis = orthonormal_complement(x);
}

double SphereManifold::membership_error(CVec x) const {
  return std::abs(x.norm() - 1.0);
}

void SphereManifold::project_point(CVec x, Vec out) const {
  double n = x.norm();
  if (n == 0.0)
    throw MembershipError("cannot project the zero vector onto the sphere");
  out = x / n;
}

double SphereManifold::tangent_error(CVec x, CVec v) const {
  return std::abs(x.dot(v));
}

void SphereManifold::project_tangent(CVec x, CVec v, Vec out) const {
  out = v - x.dot(v) * x;
}

void SphereManifold::project_embedding(CVec e, Vec out) const {
  project_point(e, out);
}

}  // namespace mvd
