#include <cmath>

#include "mvd/manifolds.hpp"

namespace mvd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double clamp_unit(double t) { return std::min(1.0, std::max(-1.0, t)); }

MatrixXd orthonormal_complement4(const MatrixXd& A) {
  Eigen::HouseholderQR<MatrixXd> qr(A);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(4, 4);
  return Q.rightCols(4 - A.cols());
}

// Arc on S^3 to the nearest representative of q; always in [0, pi/2] and
// well conditioned through the chord form.
double arc_to_nearest(CVec p, CVec q) {
  double chord = std::min((p - q).norm(), (p + q).norm());
  return 2.0 * std::asin(clamp_unit(0.5 * chord));
}

// Rotation angle of the relative rotation between p and q; the cut locus
// sits at angle pi.
double rotation_angle(CVec p, CVec q) { return 2.0 * arc_to_nearest(p, q); }

}  // namespace

bool RotationManifold::needs_flip(CVec q) {
  for (int k = 0; k < q.size(); ++k) {
    if (q[k] > 1e-9) return false;
    if (q[k] < -1e-9) return true;
  }
  return false;
}

void RotationManifold::canonicalize(Vec q) {
  if (needs_flip(q)) q = -q;
}

double RotationManifold::dist(CVec x, CVec y) const {
  return kSqrt2 * arc_to_nearest(x, y);
}

void RotationManifold::exp(CVec x, CVec v, Vec out) const {
  double len = v.norm();
  if (len < 1e-14) {
    out = x + v;
  } else {
    out = std::cos(len) * x + (std::sin(len) / len) * v;
  }
  out /= out.norm();
  canonicalize(out);
}

void RotationManifold::log(CVec x, CVec y, Vec out) const {
  double dot = x.dot(y);
  if (M_PI - rotation_angle(x, y) < tol::cut_locus)
    throw CutLocusError("rotation angle pi between quaternions");
  // representative of y nearest to x on S^3
  VectorXd q = (dot >= 0.0) ? VectorXd(y) : VectorXd(-y);
  double c = clamp_unit(std::abs(dot));
  double d = arc_to_nearest(x, y);
  out = q - c * x;
  double w = out.norm();
  if (w < 1e-14 || d < 1e-14) return;  // first-order series near c = 1
  out *= d / w;
}

double RotationManifold::inner(CVec, CVec u, CVec v) const {
  return 2.0 * u.dot(v);
}

void RotationManifold::transport_along(CVec x, CVec dir, double T, CVec v,
                                       Vec out) const {
  double len = dir.norm();
  if (len < 1e-14) {
    out = v;
  } else {
    VectorXd u = dir / len;
    double a = v.dot(u);
    double t = T * len;
    out = v - a * u + a * (std::cos(t) * u - std::sin(t) * x);
  }
  // tangents follow the sign convention of the canonical endpoint
  VectorXd end = std::cos(T * len) * x;
  if (len >= 1e-14) end += (std::sin(T * len) / len) * dir;
  if (needs_flip(end)) out = -out;
}

void RotationManifold::jacobi_frame(CVec x, CVec dir,
                                    JacobiFrame& frame) const {
  frame.manifold = key();
  frame.base = x;
  frame.direction = dir;
  double len = dir.norm();
  frame.speed = kSqrt2 * len;
  frame.basis.resize(4, 3);
  frame.kappa.resize(3);
  if (len < 1e-14) {
    tangent_basis(x, frame.basis);
    frame.kappa.setZero();
    return;
  }
  frame.basis.col(0) = dir / (kSqrt2 * len);
  frame.kappa[0] = 0.0;
  MatrixXd span(4, 2);
  span.col(0) = x;
  span.col(1) = dir / len;
  frame.basis.rightCols(2) = orthonormal_complement4(span) / kSqrt2;
  // sectional curvature 1/2 times squared metric speed 2 len^2
  frame.kappa.tail(2).setConstant(len * len);
}

void RotationManifold::frame_at(const JacobiFrame& frame, double T,
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
  if (needs_flip(dest)) {
    dest = -dest;
    basis_T = -basis_T;
  }
}

void RotationManifold::tangent_basis(CVec x, MatrixXd& basis) const {
  basis = orthonormal_complement4(x) / kSqrt2;
}

double RotationManifold::membership_error(CVec x) const {
  double err = std::abs(x.norm() - 1.0);
  for (int k = 0; k < 4; ++k) {
    if (x[k] > 1e-9) break;
    if (x[k] < -1e-9) {
      err += std::abs(x[k]);
      break;
    }
  }
  return err;
}

void RotationManifold::project_point(CVec x, Vec out) const {
  double n = x.norm();
  if (n == 0.0)
    throw MembershipError("cannot project the zero quaternion onto SO(3)");
  out = x / n;
  canonicalize(out);
}

double RotationManifold::tangent_error(CVec x, CVec v) const {
  return std::abs(x.dot(v));
}

void RotationManifold::project_tangent(CVec x, CVec v, Vec out) const {
  out = v - x.dot(v) * x;
}

void RotationManifold::project_embedding(CVec e, Vec out) const {
  project_point(e, out);
}

void RotationManifold::compose(CVec a, CVec b, Vec out) const {
  const double s1 = a[0], s2 = b[0];
  Eigen::Vector3d v1 = a.tail<3>(), v2 = b.tail<3>();
  out[0] = s1 * s2 - v1.dot(v2);
  out.tail<3>() = s1 * v2 + s2 * v1 + v1.cross(v2);
  out /= out.norm();
  canonicalize(out);
}

void RotationManifold::inverse(CVec a, Vec out) const {
  out[0] = a[0];
  out.tail<3>() = -a.tail<3>();
  canonicalize(out);
}

void RotationManifold::group_identity(Vec out) const {
  out.setZero();
  out[0] = 1.0;
}

void RotationManifold::compose_raw(CVec a, CVec b, Vec out) const {
  const double s1 = a[0], s2 = b[0];
  Eigen::Vector3d v1 = a.tail<3>(), v2 = b.tail<3>();
  out[0] = s1 * s2 - v1.dot(v2);
  out.tail<3>() = s1 * v2 + s2 * v1 + v1.cross(v2);
}

void RotationManifold::inverse_raw(CVec a, Vec out) const {
  out[0] = a[0];
  out.tail<3>() = -a.tail<3>();
}

void RotationManifold::translate_left(CVec a, CVec eta, Vec out) const {
  compose_raw(a, eta, out);
}

void RotationManifold::translate_right(CVec a, CVec eta, Vec out) const {
  compose_raw(eta, a, out);
}

}  // namespace mvd
