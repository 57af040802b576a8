#include <cmath>

#include "mvd/manifolds.hpp"

namespace mvd {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Eig {
  MatrixXd q;
  VectorXd l;
};

Eig sym_eig(const MatrixXd& s) {
  if (s.rows() == 2) {  // closed form, exact to rounding
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es;
    es.computeDirect(s);
    return {es.eigenvectors(), es.eigenvalues()};
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
  if (es.info() != Eigen::Success)
    throw GeometryError("symmetric eigendecomposition failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

// cheaper direct solver for the frame construction, whose consumers are
// the differential chains with far looser tolerances
Eig sym_eig_fast(const MatrixXd& s) {
  if (s.rows() == 3) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
    es.computeDirect(s);
    return {es.eigenvectors(), es.eigenvalues()};
  }
  return sym_eig(s);
}

MatrixXd apply_spectral(const MatrixXd& s, double (*f)(double)) {
  Eig e = sym_eig(s);
  for (int i = 0; i < e.l.size(); ++i) e.l[i] = f(e.l[i]);
  return e.q * e.l.asDiagonal() * e.q.transpose();
}

double log_floored(double l) {
  return std::log(std::max(l, tol::spd_log_floor));
}

MatrixXd mat_exp_sym(const MatrixXd& s) { return apply_spectral(s, std::exp); }
MatrixXd mat_log_sym(const MatrixXd& s) {
  return apply_spectral(s, log_floored);
}

void sqrt_pair(const MatrixXd& x, MatrixXd& rt, MatrixXd& irt) {
  Eig e = sym_eig(x);
  VectorXd sq = e.l.cwiseMax(tol::spd_log_floor).cwiseSqrt();
  rt = e.q * sq.asDiagonal() * e.q.transpose();
  irt = e.q * sq.cwiseInverse().asDiagonal() * e.q.transpose();
}

MatrixXd symmetrize(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

}  // namespace

SpdManifold::SpdManifold(int r) : r_(r), n_(r * (r + 1) / 2) {
  if (r < 1) throw GeometryError("SPD matrix size must be >= 1");
}

MatrixXd SpdManifold::unpack(CVec v) const {
  MatrixXd s(r_, r_);
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      s(i, j) = v[k];
      s(j, i) = v[k];
      ++k;
    }
  return s;
}

VectorXd SpdManifold::pack(const MatrixXd& s) const {
  VectorXd v(n_);
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) v[k++] = 0.5 * (s(i, j) + s(j, i));
  return v;
}

double SpdManifold::dist(CVec x, CVec y) const {
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  return mat_log_sym(symmetrize(irt * unpack(y) * irt)).norm();
}

void SpdManifold::exp(CVec x, CVec v, Vec out) const {
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  MatrixXd e = mat_exp_sym(symmetrize(irt * unpack(v) * irt));
  out = pack(rt * e * rt);
}

void SpdManifold::log(CVec x, CVec y, Vec out) const {
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  MatrixXd l = mat_log_sym(symmetrize(irt * unpack(y) * irt));
  out = pack(rt * l * rt);
}

double SpdManifold::inner(CVec x, CVec u, CVec v) const {
  MatrixXd xm = unpack(x);
  Eigen::LLT<MatrixXd> llt(xm);
  if (llt.info() != Eigen::Success)
    throw GeometryError("SPD base point is not positive definite");
  MatrixXd a = llt.solve(unpack(u));
  MatrixXd b = llt.solve(unpack(v));
  return (a * b).trace();
}

void SpdManifold::transport_along(CVec x, CVec dir, double T, CVec v,
                                  Vec out) const {
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  MatrixXd s = symmetrize(irt * unpack(dir) * irt);
  MatrixXd w = mat_exp_sym(0.5 * T * s);
  MatrixXd m = rt * w * irt;
  out = pack(symmetrize(m * unpack(v) * m.transpose()));
}

void SpdManifold::jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const {
  frame.manifold = key();
  frame.base = x;
  frame.direction = dir;
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  Eig e = sym_eig_fast(symmetrize(irt * unpack(dir) * irt));
  frame.speed = e.l.norm();
  frame.basis.resize(n_, n_);
  frame.kappa.resize(n_);
  MatrixXd rtq = rt * e.q;
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      if (i == j) {
        frame.basis.col(k) = pack(rtq.col(i) * rtq.col(i).transpose());
      } else {
        frame.basis.col(k) = pack((rtq.col(i) * rtq.col(j).transpose() +
                                   rtq.col(j) * rtq.col(i).transpose()) /
                                  kSqrt2);
      }
      double d = e.l[i] - e.l[j];
      frame.kappa[k] = -0.25 * d * d;
      ++k;
    }
  // closed-form transport data: the frame columns only scale along the
  // geodesic, by exp(T (lambda_i + lambda_j) / 2)
  frame.aux = rtq;
  frame.auxv = e.l;
}

void SpdManifold::frame_at(const JacobiFrame& frame, double T,
                           MatrixXd& basis_T, Vec dest) const {
  basis_T = frame.basis;
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      basis_T.col(k) *=
          std::exp(0.5 * T * (frame.auxv[i] + frame.auxv[j]));
      ++k;
    }
  VectorXd el = (T * frame.auxv).array().exp();
  dest = pack(frame.aux * el.asDiagonal() * frame.aux.transpose());
}

void SpdManifold::tangent_basis(CVec x, MatrixXd& basis) const {
  MatrixXd rt, irt;
  sqrt_pair(unpack(x), rt, irt);
  basis.resize(n_, n_);
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      MatrixXd b = MatrixXd::Zero(r_, r_);
      if (i == j) {
        b(i, i) = 1.0;
      } else {
        b(i, j) = b(j, i) = 1.0 / kSqrt2;
      }
      basis.col(k++) = pack(rt * b * rt);
    }
}

double SpdManifold::membership_error(CVec x) const {
  Eig e = sym_eig(unpack(x));
  double lmin = e.l.minCoeff();
  return (lmin > 0.0) ? 0.0 : (1e-9 - lmin);
}

void SpdManifold::project_point(CVec x, Vec out) const {
  Eig e = sym_eig(unpack(x));
  VectorXd l = e.l.cwiseMax(tol::spd_project_shift);
  out = pack(e.q * l.asDiagonal() * e.q.transpose());
}

double SpdManifold::tangent_error(CVec, CVec) const { return 0.0; }

void SpdManifold::project_tangent(CVec, CVec v, Vec out) const { out = v; }

void SpdManifold::embed(CVec x, Vec out) const {
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      out[k] = (i == j) ? x[k] : kSqrt2 * x[k];
      ++k;
    }
}

void SpdManifold::embed_tangent(CVec x, CVec v, Vec out) const {
  embed(v, out);
  (void)x;
}

void SpdManifold::project_embedding(CVec e, Vec out) const {
  VectorXd packed(n_);
  int k = 0;
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) {
      packed[k] = (i == j) ? e[k] : e[k] / kSqrt2;
      ++k;
    }
  // clip to the closed cone, then lift the spectrum back into the open one
  Eig ev = sym_eig(unpack(packed));
  VectorXd l = ev.l.cwiseMax(0.0).cwiseMax(tol::spd_project_shift);
  out = pack(ev.q * l.asDiagonal() * ev.q.transpose());
}

}  // namespace mvd
