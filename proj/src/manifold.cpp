#include "mvd/manifold.hpp"

#include "mvd/manifolds.hpp"

namespace mvd {

void Manifold::geodesic(CVec x, CVec y, double t, Vec out) const {
  VectorXd v(rep_dim());
  log(x, y, v);
  v *= t;
  exp(x, v, out);
}

void Manifold::transport(CVec x, CVec y, CVec v, Vec out) const {
  VectorXd dir(rep_dim());
  log(x, y, dir);
  transport_along(x, dir, 1.0, v, out);
}

void Manifold::frame_at(const JacobiFrame& frame, double T, MatrixXd& basis_T,
                        Vec dest) const {
  const int d = static_cast<int>(frame.basis.cols());
  basis_T.resize(rep_dim(), d);
  VectorXd tmp(rep_dim());
  for (int k = 0; k < d; ++k) {
    transport_along(frame.base, frame.direction, T, frame.basis.col(k), tmp);
    basis_T.col(k) = tmp;
  }
  VectorXd scaled = T * frame.direction;
  exp(frame.base, scaled, dest);
}

void Manifold::embed(CVec x, Vec out) const { out = x; }
void Manifold::embed_tangent(CVec, CVec v, Vec out) const { out = v; }
void Manifold::project_embedding(CVec e, Vec out) const {
  project_point(e, out);
}

void Manifold::compose(CVec, CVec, Vec) const {
  throw NotLieGroupError(tag() + " has no group structure");
}
void Manifold::inverse(CVec, Vec) const {
  throw NotLieGroupError(tag() + " has no group structure");
}
void Manifold::group_identity(Vec) const {
  throw NotLieGroupError(tag() + " has no group structure");
}
void Manifold::translate_left(CVec, CVec, Vec) const {
  throw NotLieGroupError(tag() + " has no group structure");
}
void Manifold::translate_right(CVec, CVec, Vec) const {
  throw NotLieGroupError(tag() + " has no group structure");
}
void Manifold::compose_raw(CVec a, CVec b, Vec out) const {
  compose(a, b, out);
}
void Manifold::inverse_raw(CVec a, Vec out) const { inverse(a, out); }

std::shared_ptr<const Manifold> make_manifold(const std::string& tag) {
  if (tag == "s1") return std::make_shared<CircleManifold>();
  if (tag == "so3") return std::make_shared<RotationManifold>();
  if (tag.size() > 1 && tag[0] == 's' &&
      tag.find_first_not_of("0123456789", 1) == std::string::npos) {
    int d = std::stoi(tag.substr(1));
    if (d >= 1) return std::make_shared<SphereManifold>(d);
  }
  if (tag.rfind("spd", 0) == 0 && tag.size() > 3) {
    int r = std::stoi(tag.substr(3));
    if (r >= 1) return std::make_shared<SpdManifold>(r);
  }
  throw IoError("unknown manifold tag: " + tag);
}

std::shared_ptr<const Manifold> make_manifold(const ManifoldKey& key) {
  switch (key.kind) {
    case ManifoldKind::Circle:
      return std::make_shared<CircleManifold>();
    case ManifoldKind::Sphere:
      return std::make_shared<SphereManifold>(key.param);
    case ManifoldKind::Rotations:
      return std::make_shared<RotationManifold>();
    case ManifoldKind::Spd:
      return std::make_shared<SpdManifold>(key.param);
  }
  throw IoError("unknown manifold key");
}

namespace {

void require_same_manifold(const Manifold& m, const ManifoldPoint& x,
                           const ManifoldPoint& y) {
  if (!(x.manifold == m.key()) || !(y.manifold == m.key()))
    throw ManifoldMismatchError("points belong to different manifolds");
}

void require_base(const Manifold& m, const ManifoldPoint& x,
                  const TangentVector& v) {
  if (!(v.base.manifold == m.key()) || !(x.manifold == m.key()) ||
      (v.base.coords - x.coords).lpNorm<Eigen::Infinity>() > 1e-12)
    throw ManifoldMismatchError("tangent vector based at a different point");
}

}  // namespace

ManifoldPoint make_point(const Manifold& m, VectorXd coords) {
  if (coords.size() != m.rep_dim())
    throw MembershipError("wrong representation length for " + m.tag());
  double err = m.membership_error(coords);
  if (err > tol::membership)
    throw MembershipError("point violates " + m.tag() +
                          " membership, error " + std::to_string(err));
  return {std::move(coords), m.key()};
}

TangentVector make_tangent(const Manifold& m, const ManifoldPoint& base,
                           VectorXd vec) {
  if (vec.size() != m.rep_dim())
    throw MembershipError("wrong representation length for " + m.tag());
  double err = m.tangent_error(base.coords, vec);
  if (err > tol::membership)
    throw MembershipError("vector is not tangent at its base, error " +
                          std::to_string(err));
  return {base, std::move(vec)};
}

TangentVector zero_tangent(const Manifold& m, const ManifoldPoint& base) {
  return {base, VectorXd::Zero(m.rep_dim())};
}

double dist(const Manifold& m, const ManifoldPoint& x,
            const ManifoldPoint& y) {
  require_same_manifold(m, x, y);
  return m.dist(x.coords, y.coords);
}

ManifoldPoint exp(const Manifold& m, const ManifoldPoint& x,
                  const TangentVector& v) {
  require_base(m, x, v);
  VectorXd out(m.rep_dim());
  m.exp(x.coords, v.vec, out);
  return {std::move(out), m.key()};
}

TangentVector log(const Manifold& m, const ManifoldPoint& x,
                  const ManifoldPoint& y) {
  require_same_manifold(m, x, y);
  VectorXd out(m.rep_dim());
  m.log(x.coords, y.coords, out);
  return {x, std::move(out)};
}

ManifoldPoint geodesic(const Manifold& m, const ManifoldPoint& x,
                       const ManifoldPoint& y, double t) {
  require_same_manifold(m, x, y);
  VectorXd out(m.rep_dim());
  m.geodesic(x.coords, y.coords, t, out);
  return {std::move(out), m.key()};
}

double inner(const Manifold& m, const ManifoldPoint& x, const TangentVector& u,
             const TangentVector& v) {
  require_base(m, x, u);
  require_base(m, x, v);
  return m.inner(x.coords, u.vec, v.vec);
}

TangentVector parallel_transport(const Manifold& m, const ManifoldPoint& x,
                                 const ManifoldPoint& y,
                                 const TangentVector& v) {
  require_base(m, x, v);
  require_same_manifold(m, x, y);
  VectorXd out(m.rep_dim());
  m.transport(x.coords, y.coords, v.vec, out);
  return {y, std::move(out)};
}

JacobiFrame jacobi_frame(const Manifold& m, const ManifoldPoint& x,
                         const ManifoldPoint& y) {
  require_same_manifold(m, x, y);
  VectorXd dir(m.rep_dim());
  m.log(x.coords, y.coords, dir);
  JacobiFrame frame;
  m.jacobi_frame(x.coords, dir, frame);
  return frame;
}

ManifoldPoint project_to_manifold(const Manifold& m, CVec embedding_vector) {
  if (embedding_vector.size() != m.embed_dim())
    throw MembershipError("wrong embedding length for " + m.tag());
  VectorXd out(m.rep_dim());
  m.project_embedding(embedding_vector, out);
  return {std::move(out), m.key()};
}

}  // namespace mvd
