#pragma once

#include "mvd/manifold.hpp"

namespace mvd {

// S^1 stored intrinsically as an angle in [-pi, pi); embeds into R^2 for
// the extrinsic solvers.  Group structure is addition of angles mod 2pi.
class CircleManifold final : public Manifold {
 public:
  ManifoldKey key() const override { return {ManifoldKind::Circle, 0}; }
  std::string tag() const override { return "s1"; }
  int dim() const override { return 1; }
  int rep_dim() const override { return 1; }
  int embed_dim() const override { return 2; }
  bool lie_group() const override { return true; }

  double dist(CVec x, CVec y) const override;
  void exp(CVec x, CVec v, Vec out) const override;
  void log(CVec x, CVec y, Vec out) const override;
  double inner(CVec x, CVec u, CVec v) const override;
  void transport_along(CVec x, CVec dir, double T, CVec v,
                       Vec out) const override;
  void jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const override;
  void frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                Vec dest) const override;
  void tangent_basis(CVec x, MatrixXd& basis) const override;
  double membership_error(CVec x) const override;
  void project_point(CVec x, Vec out) const override;
  double tangent_error(CVec x, CVec v) const override;
  void project_tangent(CVec x, CVec v, Vec out) const override;
  void embed(CVec x, Vec out) const override;
  void embed_tangent(CVec x, CVec v, Vec out) const override;
  void project_embedding(CVec e, Vec out) const override;
  void compose(CVec a, CVec b, Vec out) const override;
  void inverse(CVec a, Vec out) const override;
  void group_identity(Vec out) const override;
  void translate_left(CVec a, CVec eta, Vec out) const override;
  void translate_right(CVec a, CVec eta, Vec out) const override;
};

// Unit sphere S^d embedded in R^{d+1} with the induced metric.
class SphereManifold : public Manifold {
 public:
  explicit SphereManifold(int d);

  ManifoldKey key() const override { return {ManifoldKind::Sphere, d_}; }
  std::string tag() const override { return "s" + std::to_string(d_); }
  int dim() const override { return d_; }
  int rep_dim() const override { return d_ + 1; }
  int embed_dim() const override { return d_ + 1; }

  double dist(CVec x, CVec y) const override;
  void exp(CVec x, CVec v, Vec out) const override;
  void log(CVec x, CVec y, Vec out) const override;
  double inner(CVec x, CVec u, CVec v) const override;
  void transport_along(CVec x, CVec dir, double T, CVec v,
                       Vec out) const override;
  void jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const override;
  void frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                Vec dest) const override;
  void tangent_basis(CVec x, MatrixXd& basis) const override;
  double membership_error(CVec x) const override;
  void project_point(CVec x, Vec out) const override;
  double tangent_error(CVec x, CVec v) const override;
  void project_tangent(CVec x, CVec v, Vec out) const override;
  void project_embedding(CVec e, Vec out) const override;

 private:
  int d_;
};

// SO(3) as unit quaternions in R^4, canonical representative has first
// nonzero component positive.  The metric carries the sqrt(2) scaling that
// makes the quaternion chart isometric to SO(3) with its matrix distance
// sqrt(2) arccos((tr - 1)/2).
class RotationManifold final : public Manifold {
 public:
  ManifoldKey key() const override { return {ManifoldKind::Rotations, 0}; }
  std::string tag() const override { return "so3"; }
  int dim() const override { return 3; }
  int rep_dim() const override { return 4; }
  int embed_dim() const override { return 4; }
  bool lie_group() const override { return true; }

  double dist(CVec x, CVec y) const override;
  void exp(CVec x, CVec v, Vec out) const override;
  void log(CVec x, CVec y, Vec out) const override;
  double inner(CVec x, CVec u, CVec v) const override;
  void transport_along(CVec x, CVec dir, double T, CVec v,
                       Vec out) const override;
  void jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const override;
  void frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                Vec dest) const override;
  void tangent_basis(CVec x, MatrixXd& basis) const override;
  double membership_error(CVec x) const override;
  void project_point(CVec x, Vec out) const override;
  double tangent_error(CVec x, CVec v) const override;
  void project_tangent(CVec x, CVec v, Vec out) const override;
  void project_embedding(CVec e, Vec out) const override;
  void compose(CVec a, CVec b, Vec out) const override;
  void inverse(CVec a, Vec out) const override;
  void group_identity(Vec out) const override;
  void translate_left(CVec a, CVec eta, Vec out) const override;
  void translate_right(CVec a, CVec eta, Vec out) const override;
  void compose_raw(CVec a, CVec b, Vec out) const override;
  void inverse_raw(CVec a, Vec out) const override;

  // Canonical sign: flip so the first nonzero component is positive.
  static void canonicalize(Vec q);
  static bool needs_flip(CVec q);
};

// SPD(r) with the affine-invariant metric, stored as the packed upper
// triangle (row major, length r(r+1)/2).  The extrinsic embedding scales
// off-diagonal entries by sqrt(2) so the embedding norm is the Frobenius
// norm of the symmetric matrix.
class SpdManifold final : public Manifold {
 public:
  explicit SpdManifold(int r);

  ManifoldKey key() const override { return {ManifoldKind::Spd, r_}; }
  std::string tag() const override { return "spd" + std::to_string(r_); }
  int dim() const override { return n_; }
  int rep_dim() const override { return n_; }
  int embed_dim() const override { return n_; }

  double dist(CVec x, CVec y) const override;
  void exp(CVec x, CVec v, Vec out) const override;
  void log(CVec x, CVec y, Vec out) const override;
  double inner(CVec x, CVec u, CVec v) const override;
  void transport_along(CVec x, CVec dir, double T, CVec v,
                       Vec out) const override;
  void jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const override;
  void frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                Vec dest) const override;
  void tangent_basis(CVec x, MatrixXd& basis) const override;
  double membership_error(CVec x) const override;
  void project_point(CVec x, Vec out) const override;
  double tangent_error(CVec x, CVec v) const override;
  void project_tangent(CVec x, CVec v, Vec out) const override;
  void embed(CVec x, Vec out) const override;
  void embed_tangent(CVec x, CVec v, Vec out) const override;
  void project_embedding(CVec e, Vec out) const override;

  int matrix_size() const { return r_; }
  MatrixXd unpack(CVec v) const;
  VectorXd pack(const MatrixXd& s) const;

 private:
  int r_;
  int n_;
};

double wrap_angle(double a);  // into [-pi, pi)

}  // namespace mvd
