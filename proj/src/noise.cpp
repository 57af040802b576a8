#include "mvd/noise.hpp"

#include <random>

#include "mvd/manifolds.hpp"

namespace mvd {

NoiseKind noise_kind_from_name(const std::string& name) {
  if (name == "wrapped_gaussian") return NoiseKind::WrappedGaussian;
  if (name == "tangent_gaussian") return NoiseKind::TangentGaussian;
  throw IoError("unknown noise kind: " + name);
}

ManifoldImage add_noise(const ManifoldImage& u, const NoiseSpec& spec) {
  if (!(spec.sigma > 0)) throw IoError("noise sigma must be positive");
  const Manifold& m = u.manifold();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> g(0.0, spec.sigma);
  ManifoldImage out(u.manifold_ptr(), u.n1(), u.n2());

  if (spec.kind == NoiseKind::WrappedGaussian) {
    if (m.key().kind != ManifoldKind::Circle)
      throw IoError("wrapped_gaussian noise is defined on S^1 only");
    for (int i = 0; i < u.size(); ++i)
      out.pixel(i)[0] = wrap_angle(u.pixel(i)[0] + g(rng));
    return out;
  }

  MatrixXd basis;
  VectorXd v(m.rep_dim());
  for (int i = 0; i < u.size(); ++i) {
    m.tangent_basis(u.pixel(i), basis);
    v.setZero();
    for (int k = 0; k < basis.cols(); ++k) v += g(rng) * basis.col(k);
    m.exp(u.pixel(i), v, out.pixel(i));
  }
  return out;
}

}  // namespace mvd
