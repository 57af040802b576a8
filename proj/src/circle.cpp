#include <cmath>

#include "mvd/manifolds.hpp"

namespace mvd {

double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w >= M_PI) w -= 2.0 * M_PI;  // remainder may return +pi exactly
  return w;
}

double CircleManifold::dist(CVec x, CVec y) const {
  return std::abs(wrap_angle(y[0] - x[0]));
}

void CircleManifold::exp(CVec x, CVec v, Vec out) const {
  out[0] = wrap_angle(x[0] + v[0]);
}

void CircleManifold::log(CVec x, CVec y, Vec out) const {
  double d = wrap_angle(y[0] - x[0]);
  if (M_PI - std::abs(d) < tol::cut_locus)
    throw CutLocusError("antipodal points on S^1");
  out[0] = d;
}

double CircleManifold::inner(CVec, CVec u, CVec v) const {
  return u[0] * v[0];
}

void CircleManifold::transport_along(CVec, CVec, double, CVec v,
                                     Vec out) const {
  out[0] = v[0];
}

void CircleManifold::jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const {
  frame.manifold = key();
  frame.base = x;
  frame.direction = dir;
  frame.basis.setOnes(1, 1);
  frame.kappa.setZero(1);
  frame.speed = std::abs(dir[0]);
}

void CircleManifold::frame_at(const JacobiFrame& frame, double T,
                              MatrixXd& basis_T, Vec dest) const {
  basis_T = frame.basis;
  dest[0] = wrap_angle(frame.base[0] + T * frame.direction[0]);
}

void CircleManifold::tangent_basis(CVec, MatrixXd& basis) const {
  basis.setOnes(1, 1);
}

double CircleManifold::membership_error(CVec x) const {
  return std::abs(x[0] - wrap_angle(x[0]));
}

void CircleManifold::project_point(CVec x, Vec out) const {
  out[0] = wrap_angle(x[0]);
}

double CircleManifold::tangent_error(CVec, CVec) const { return 0.0; }

void CircleManifold::project_tangent(CVec, CVec v, Vec out) const {
  out[0] = v[0];
}

void CircleManifold::embed(CVec x, Vec out) const {
  out[0] = std::cos(x[0]);
  out[1] = std::sin(x[0]);
}

void CircleManifold::embed_tangent(CVec x, CVec v, Vec out) const {
  out[0] = -std::sin(x[0]) * v[0];
  out[1] = std::cos(x[0]) * v[0];
}

void CircleManifold::project_embedding(CVec e, Vec out) const {
  if (e.norm() == 0.0)
    throw MembershipError("cannot project the zero vector onto S^1");
  out[0] = std::atan2(e[1], e[0]);
  out[0] = wrap_angle(out[0]);
}

void CircleManifold::compose(CVec a, CVec b, Vec out) const {
  out[0] = wrap_angle(a[0] + b[0]);
}

void CircleManifold::inverse(CVec a, Vec out) const {
  out[0] = wrap_angle(-a[0]);
}

void CircleManifold::group_identity(Vec out) const { out[0] = 0.0; }

void CircleManifold::translate_left(CVec, CVec eta, Vec out) const {
  out[0] = eta[0];
}

void CircleManifold::translate_right(CVec, CVec eta, Vec out) const {
  out[0] = eta[0];
}

}  // namespace mvd
