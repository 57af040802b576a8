#pragma once

#include <memory>
#include <vector>

#include "mvd/types.hpp"

namespace mvd {

// Parallel transported orthonormal frame along t -> exp_x(t dir) that
// diagonalizes the curvature operator R(., dir)dir.  Eigenvalues kappa
// include the squared speed, so the Jacobi coefficient maps evaluate at
// kappa directly.
struct JacobiFrame {
  ManifoldKey manifold;
  VectorXd base;
  VectorXd direction;
  MatrixXd basis;   // rep_dim x dim, metric-orthonormal at base
  VectorXd kappa;   // dim curvature eigenvalues
  double speed{0};  // metric norm of direction
  // manifold-specific data for closed-form frame transport
  MatrixXd aux;
  VectorXd auxv;
};

class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKey key() const = 0;
  virtual std::string tag() const = 0;
  virtual int dim() const = 0;        // intrinsic dimension
  virtual int rep_dim() const = 0;    // storage length of points/tangents
  virtual int embed_dim() const = 0;  // length of the extrinsic embedding
  virtual bool lie_group() const { return false; }

  virtual double dist(CVec x, CVec y) const = 0;
  virtual void exp(CVec x, CVec v, Vec out) const = 0;
  virtual void log(CVec x, CVec y, Vec out) const = 0;
  virtual double inner(CVec x, CVec u, CVec v) const = 0;

  // gamma(x, y; t) = exp_x(t log_x y); t is unrestricted.
  virtual void geodesic(CVec x, CVec y, double t, Vec out) const;

  // Closed-form parallel transport along the minimizing geodesic x -> y.
  virtual void transport(CVec x, CVec y, CVec v, Vec out) const;

  // Parallel transport of v from x to exp_x(T dir) along t -> exp_x(t dir);
  // valid for any T, which the pole ladder needs at T = 2.
  virtual void transport_along(CVec x, CVec dir, double T, CVec v,
                               Vec out) const = 0;

  virtual void jacobi_frame(CVec x, CVec dir, JacobiFrame& frame) const = 0;

  // Frame columns transported to parameter T along the frame geodesic,
  // together with the geodesic point there.  The default walks
  // transport_along; the concrete manifolds override with closed forms.
  virtual void frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                        Vec dest) const;

  // Metric-orthonormal basis of T_x M, deterministic construction.
  virtual void tangent_basis(CVec x, MatrixXd& basis) const = 0;

  // Constraint violation of the membership predicate (0 on the manifold).
  virtual double membership_error(CVec x) const = 0;
  // Reprojection used to absorb representation drift after exp/geodesic.
  virtual void project_point(CVec x, Vec out) const = 0;
  virtual double tangent_error(CVec x, CVec v) const = 0;
  virtual void project_tangent(CVec x, CVec v, Vec out) const = 0;

  // Extrinsic embedding adapter; identity for manifolds stored embedded.
  virtual void embed(CVec x, Vec out) const;
  virtual void embed_tangent(CVec x, CVec v, Vec out) const;
  // Nearest-point projection from the embedding space onto the manifold.
  virtual void project_embedding(CVec e, Vec out) const;

  // Lie group operations; only S^1 and SO(3) provide them.
  virtual void compose(CVec a, CVec b, Vec out) const;
  virtual void inverse(CVec a, Vec out) const;
  virtual void group_identity(Vec out) const;

  // Differentials of the left/right translations by a, applied to a
  // tangent vector.  These act on the raw representation (no canonical
  // sign flip) so that chained products of tangents stay coherent.
  virtual void translate_left(CVec a, CVec eta, Vec out) const;
  virtual void translate_right(CVec a, CVec eta, Vec out) const;
  // Representation-level group product (no canonicalization).
  virtual void compose_raw(CVec a, CVec b, Vec out) const;
  virtual void inverse_raw(CVec a, Vec out) const;

  double norm(CVec x, CVec v) const { return std::sqrt(inner(x, v, v)); }
  bool on_manifold(CVec x, double eps = tol::membership) const {
    return membership_error(x) <= eps;
  }
};

std::shared_ptr<const Manifold> make_manifold(const std::string& tag);
std::shared_ptr<const Manifold> make_manifold(const ManifoldKey& key);

// -- checked operations on carried-base value types ---------------------

ManifoldPoint make_point(const Manifold& m, VectorXd coords);
TangentVector make_tangent(const Manifold& m, const ManifoldPoint& base,
                           VectorXd vec);
TangentVector zero_tangent(const Manifold& m, const ManifoldPoint& base);

double dist(const Manifold& m, const ManifoldPoint& x, const ManifoldPoint& y);
ManifoldPoint exp(const Manifold& m, const ManifoldPoint& x,
                  const TangentVector& v);
TangentVector log(const Manifold& m, const ManifoldPoint& x,
                  const ManifoldPoint& y);
ManifoldPoint geodesic(const Manifold& m, const ManifoldPoint& x,
                       const ManifoldPoint& y, double t);
double inner(const Manifold& m, const ManifoldPoint& x, const TangentVector& u,
             const TangentVector& v);
TangentVector parallel_transport(const Manifold& m, const ManifoldPoint& x,
                                 const ManifoldPoint& y,
                                 const TangentVector& v);
JacobiFrame jacobi_frame(const Manifold& m, const ManifoldPoint& x,
                         const ManifoldPoint& y);
ManifoldPoint project_to_manifold(const Manifold& m, CVec embedding_vector);

}  // namespace mvd
