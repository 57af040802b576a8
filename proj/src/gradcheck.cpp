#include "mvd/gradcheck.hpp"

#include <random>

#include "mvd/manifolds.hpp"

namespace mvd {

namespace {

using Rng = std::mt19937_64;

VectorXd random_tangent_at(const Manifold& m, CVec x, Rng& rng,
                           double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  MatrixXd basis;
  m.tangent_basis(x, basis);
  VectorXd v = VectorXd::Zero(m.rep_dim());
  for (int k = 0; k < basis.cols(); ++k) v += scale * g(rng) * basis.col(k);
  return v;
}

struct Direction {
  std::vector<MatrixXd> images;
  std::optional<MatrixXd> xi;
};

Direction random_direction(const State& state, Rng& rng) {
  Direction d;
  for (const auto& u : state.images) {
    const Manifold& m = u.manifold();
    MatrixXd block(m.rep_dim(), u.size());
    for (int i = 0; i < u.size(); ++i)
      block.col(i) = random_tangent_at(m, u.pixel(i), rng, 1.0);
    d.images.push_back(std::move(block));
  }
  if (state.xi) {
    const ManifoldImage& u = state.images[0];
    const Manifold& m = u.manifold();
    const int rep = m.rep_dim();
    MatrixXd block(2 * rep, u.size());
    for (int i = 0; i < u.size(); ++i)
      for (int k = 0; k < 2; ++k)
        block.col(i).segment(k * rep, rep) =
            random_tangent_at(m, u.pixel(i), rng, 1.0);
    d.xi = std::move(block);
  }
  return d;
}

State perturb(const State& state, const Direction& dir, double h) {
  State out = state;
  for (size_t img = 0; img < state.images.size(); ++img) {
    const Manifold& m = state.images[img].manifold();
    VectorXd step(m.rep_dim());
    for (int i = 0; i < state.images[img].size(); ++i) {
      step = h * dir.images[img].col(i);
      m.exp(state.images[img].pixel(i), step, out.images[img].pixel(i));
    }
  }
  if (state.xi) {
    const ManifoldImage& u = state.images[0];
    const Manifold& m = u.manifold();
    const int rep = m.rep_dim();
    VectorXd step(rep), upd(rep), moved(rep);
    for (int i = 0; i < u.size(); ++i) {
      step = h * dir.images[0].col(i);
      for (int k = 0; k < 2; ++k) {
        upd = state.xi->component(i, k) + h * dir.xi->col(i).segment(k * rep, rep);
        m.transport_along(u.pixel(i), step, 1.0, upd, moved);
        out.xi->component(i, k) = moved;
      }
    }
    out.xi->base() = out.images[0];
  }
  return out;
}

double pair_direction(const State& state, const GradientBundle& g,
                      const Direction& dir) {
  double total = 0;
  for (size_t img = 0; img < state.images.size(); ++img) {
    const Manifold& m = state.images[img].manifold();
    for (int i = 0; i < state.images[img].size(); ++i)
      total += m.inner(state.images[img].pixel(i), g.images[img].col(i),
                       dir.images[img].col(i));
  }
  if (g.xi) {
    const ManifoldImage& u = state.images[0];
    const Manifold& m = u.manifold();
    const int rep = m.rep_dim();
    for (int i = 0; i < u.size(); ++i)
      for (int k = 0; k < 2; ++k)
        total += m.inner(u.pixel(i), g.xi->col(i).segment(k * rep, rep),
                         dir.xi->col(i).segment(k * rep, rep));
  }
  return total;
}

}  // namespace

ManifoldImage random_image(std::shared_ptr<const Manifold> m, int n1, int n2,
                           double spread, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ManifoldImage out(m, n1, n2);
  // random base point
  VectorXd base;
  switch (m->key().kind) {
    case ManifoldKind::Circle: {
      base.resize(1);
      std::uniform_real_distribution<double> u(-M_PI, M_PI);
      base[0] = u(rng);
      break;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::Rotations: {
      VectorXd v(m->rep_dim());
      for (int i = 0; i < v.size(); ++i) v[i] = g(rng);
      base.resize(m->rep_dim());
      m->project_point(v / v.norm(), base);
      break;
    }
    case ManifoldKind::Spd: {
      int r = m->key().param;
      MatrixXd eye = MatrixXd::Identity(r, r);
      const auto& spd = dynamic_cast<const SpdManifold&>(*m);
      VectorXd e = spd.pack(eye);
      VectorXd v = random_tangent_at(*m, e, rng, 0.4);
      base.resize(m->rep_dim());
      m->exp(e, v, base);
      break;
    }
  }
  for (int i = 0; i < out.size(); ++i) {
    VectorXd v = random_tangent_at(*m, base, rng, spread);
    m->exp(base, v, out.pixel(i));
  }
  return out;
}

State random_check_state(Model model, const ManifoldImage& f,
                         std::uint64_t seed) {
  Rng rng(seed);
  State s = initial_state(model, f);
  // jitter every variable so no term sits at a symmetric point
  for (auto& u : s.images) {
    const Manifold& m = u.manifold();
    VectorXd v(m.rep_dim()), moved(m.rep_dim());
    for (int i = 0; i < u.size(); ++i) {
      v = random_tangent_at(m, u.pixel(i), rng, 0.1);
      m.exp(u.pixel(i), v, moved);
      u.pixel(i) = moved;
    }
  }
  if (s.xi) {
    s.xi->base() = s.images[0];
    const Manifold& m = f.manifold();
    const int rep = m.rep_dim();
    for (int i = 0; i < f.size(); ++i)
      for (int k = 0; k < 2; ++k)
        s.xi->component(i, k) =
            random_tangent_at(m, s.images[0].pixel(i), rng, 0.3);
  }
  return s;
}

GradCheckResult gradient_fd_check(const State& state, const ManifoldImage& f,
                                  const ModelConfig& cfg, int directions,
                                  double h, double tol, std::uint64_t seed) {
  Rng rng(seed);
  GradCheckResult res;
  GradientBundle grad = grad_energy(state, f, cfg);
  for (int it = 0; it < directions; ++it) {
    Direction dir = random_direction(state, rng);
    double analytic = pair_direction(state, grad, dir);
    double ep = energy(perturb(state, dir, h), f, cfg).total;
    double em = energy(perturb(state, dir, -h), f, cfg).total;
    double fd = (ep - em) / (2.0 * h);
    double err = std::abs(analytic - fd) / std::max(std::abs(fd), 1e-7);
    res.worst_rel_err = std::max(res.worst_rel_err, err);
    ++res.checked;
    if (err > tol) ++res.failed;
  }
  return res;
}

}  // namespace mvd
