#include "mvd/energies.hpp"

#include <cmath>

#include "mvd/karcher.hpp"
#include "mvd/parallel.hpp"

namespace mvd {

namespace {

double sq(double t) { return t * t; }

EnergyValue assemble(double data, double prior, double alpha) {
  return {data + alpha * prior, data, prior};
}

}  // namespace

Model model_from_name(const std::string& name) {
  if (name == "tv") return Model::Tv;
  if (name == "additive") return Model::Additive;
  if (name == "ic_midpoint") return Model::IcMidpoint;
  if (name == "tgv_pole") return Model::TgvPole;
  if (name == "ic_lie") return Model::IcLie;
  if (name == "tgv_lie") return Model::TgvLie;
  if (name == "ext_ic") return Model::ExtIc;
  if (name == "ext_tgv") return Model::ExtTgv;
  if (name == "ext_additive") return Model::ExtAdditive;
  throw IoError("unknown model: " + name);
}

std::string model_name(Model model) {
  switch (model) {
    case Model::Tv: return "tv";
    case Model::Additive: return "additive";
    case Model::IcMidpoint: return "ic_midpoint";
    case Model::TgvPole: return "tgv_pole";
    case Model::IcLie: return "ic_lie";
    case Model::TgvLie: return "tgv_lie";
    case Model::ExtIc: return "ext_ic";
    case Model::ExtTgv: return "ext_tgv";
    case Model::ExtAdditive: return "ext_additive";
  }
  return "?";
}

bool model_is_extrinsic(Model model) {
  return model == Model::ExtIc || model == Model::ExtTgv ||
         model == Model::ExtAdditive;
}

void validate(const ModelConfig& cfg) {
  if (!(cfg.alpha > 0)) throw IoError("alpha must be positive");
  if (!(cfg.beta > 0 && cfg.beta <= 1)) throw IoError("beta must be in (0,1]");
  if (cfg.epsilon < 0) throw IoError("epsilon must be nonnegative");
}

double data_term(const ManifoldImage& u, const ManifoldImage& f) {
  require_same_shape(u, f, "data term");
  const Manifold& m = u.manifold();
  return 0.5 * parallel_sum(u.size(), [&](int i) {
           return sq(m.dist(f.pixel(i), u.pixel(i)));
         });
}

double tv_int(const ManifoldImage& u, double eps) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  return parallel_sum(g.size(), [&](int i) {
    int i1 = i % g.n1, i2 = i / g.n1;
    double s = 0;
    try {
      if (g.contains(i1 + 1, i2))
        s += sq(m.dist(u.pixel(i), u.pixel(i1 + 1, i2)));
      if (g.contains(i1, i2 + 1))
        s += sq(m.dist(u.pixel(i), u.pixel(i1, i2 + 1)));
    } catch (const GeometryError& err) {
      rethrow_at_pixel(err, i1, i2);
    }
    return std::sqrt(s + sq(eps));
  });
}

double tv2_int(const ManifoldImage& u, double eps) {
  SecondDiffs d = second_diffs_image(u);
  double total = 0;
  for (int i = 0; i < u.size(); ++i)
    total += std::sqrt(sq(d.dxx[i]) + sq(d.dyy[i]) + sq(d.dxy[i]) +
                       sq(d.dyx[i]) + sq(eps));
  return total;
}

double tv2_lie(const ManifoldImage& u, double eps) {
  const Manifold& m = u.manifold();
  LieSecondDiffs d = lie_second_diffs(u);
  VectorXd e(m.rep_dim());
  m.group_identity(e);
  double total = 0;
  for (int i = 0; i < u.size(); ++i)
    total += std::sqrt(sq(m.dist(d.dxx.pixel(i), e)) +
                       sq(m.dist(d.dyy.pixel(i), e)) +
                       sq(m.dist(d.dxy.pixel(i), e)) +
                       sq(m.dist(d.dyx.pixel(i), e)) + sq(eps));
  return total;
}

EnergyValue energy_additive(const ManifoldImage& u, const ManifoldImage& f,
                            const ModelConfig& cfg) {
  double prior = cfg.beta * tv_int(u, cfg.epsilon);
  if (cfg.beta < 1.0) prior += (1 - cfg.beta) * tv2_int(u, cfg.epsilon);
  return assemble(data_term(u, f), prior, cfg.alpha);
}

ManifoldImage midpoint_image(const ManifoldImage& v, const ManifoldImage& w) {
  require_same_shape(v, w, "midpoint image");
  const Manifold& m = v.manifold();
  ManifoldImage out(v.manifold_ptr(), v.n1(), v.n2());
  for (int i = 0; i < v.size(); ++i) {
    try {
      m.geodesic(v.pixel(i), w.pixel(i), 0.5, out.pixel(i));
    } catch (const CutLocusError&) {
      throw AmbiguousMidpointError(
          "pixel " + std::to_string(i) +
          ": antipodal v/w, the reconstruction midpoint is not unique");
    }
  }
  return out;
}

ManifoldImage lie_compose_images(const ManifoldImage& v,
                                 const ManifoldImage& w) {
  require_same_shape(v, w, "group composition");
  const Manifold& m = v.manifold();
  require_lie_group(m);
  ManifoldImage out(v.manifold_ptr(), v.n1(), v.n2());
  for (int i = 0; i < v.size(); ++i)
    m.compose(v.pixel(i), w.pixel(i), out.pixel(i));
  return out;
}

EnergyValue energy_ic_midpoint(const ManifoldImage& v, const ManifoldImage& w,
                               const ManifoldImage& f, const ModelConfig& cfg) {
  ManifoldImage mid = midpoint_image(v, w);
  double prior = cfg.beta * tv_int(v, cfg.epsilon) +
                 (1 - cfg.beta) * tv2_int(w, cfg.epsilon);
  return assemble(data_term(mid, f), prior, cfg.alpha);
}

EnergyValue energy_tgv_pole(const ManifoldImage& u, const TangentField& xi,
                            const ManifoldImage& f, const ModelConfig& cfg) {
  if (xi.comps() != 2)
    throw ManifoldMismatchError("tgv_pole needs a two-component field");
  if ((xi.base().pts - u.pts).lpNorm<Eigen::Infinity>() > 1e-12)
    throw ManifoldMismatchError("tangent field is not based at the iterate");
  const Manifold& m = u.manifold();

  TangentField grad_u = intrinsic_gradient(u);
  double first = parallel_sum(u.size(), [&](int i) {
    VectorXd rx = grad_u.component(i, 0) - xi.component(i, 0);
    VectorXd ry = grad_u.component(i, 1) - xi.component(i, 1);
    double s = m.inner(u.pixel(i), rx, rx) + m.inner(u.pixel(i), ry, ry);
    return std::sqrt(s + sq(cfg.epsilon));
  });

  TangentField bx = backward_diff_pole(xi, Axis::X);
  TangentField by = backward_diff_pole(xi, Axis::Y);
  double second = parallel_sum(u.size(), [&](int i) {
    double s = 0;
    for (int k = 0; k < 2; ++k) {
      s += m.inner(u.pixel(i), bx.component(i, k), bx.component(i, k));
      s += m.inner(u.pixel(i), by.component(i, k), by.component(i, k));
    }
    return std::sqrt(s + sq(cfg.epsilon));
  });

  double prior = cfg.beta * first + (1 - cfg.beta) * second;
  return assemble(data_term(u, f), prior, cfg.alpha);
}

EnergyValue energy_ic_lie(const ManifoldImage& v, const ManifoldImage& w,
                          const ManifoldImage& f, const ModelConfig& cfg) {
  ManifoldImage vw = lie_compose_images(v, w);
  double prior = cfg.beta * tv_int(v, cfg.epsilon) +
                 (1 - cfg.beta) * tv2_lie(w, cfg.epsilon);
  return assemble(data_term(vw, f), prior, cfg.alpha);
}

EnergyValue energy_tgv_lie(const ManifoldImage& u, const ManifoldImage& a1,
                           const ManifoldImage& a2, const ManifoldImage& f,
                           const ModelConfig& cfg) {
  const Manifold& m = u.manifold();
  require_lie_group(m);
  require_same_shape(u, a1, "tgv_lie");
  require_same_shape(u, a2, "tgv_lie");

  ManifoldImage dx = lie_forward_diff(u, Axis::X);
  ManifoldImage dy = lie_forward_diff(u, Axis::Y);
  double first = 0;
  for (int i = 0; i < u.size(); ++i) {
    first += sq(m.dist(dx.pixel(i), a1.pixel(i)));
    first += sq(m.dist(dy.pixel(i), a2.pixel(i)));
  }

  ManifoldImage b1x = lie_backward_diff(a1, Axis::X);
  ManifoldImage b1y = lie_backward_diff(a1, Axis::Y);
  ManifoldImage b2x = lie_backward_diff(a2, Axis::X);
  ManifoldImage b2y = lie_backward_diff(a2, Axis::Y);
  VectorXd e(m.rep_dim());
  m.group_identity(e);
  double second = 0;
  for (int i = 0; i < u.size(); ++i) {
    second += sq(m.dist(b1x.pixel(i), e)) + sq(m.dist(b2y.pixel(i), e));
    second += sq(m.dist(b1y.pixel(i), e)) + sq(m.dist(b2x.pixel(i), e));
  }

  // two grouped square roots over the whole grid, smoothed inside each
  double prior = cfg.beta * std::sqrt(first + sq(cfg.epsilon)) +
                 (1 - cfg.beta) * std::sqrt(second + sq(cfg.epsilon));
  return assemble(data_term(u, f), prior, cfg.alpha);
}

EnergyValue energy(const State& state, const ManifoldImage& f,
                   const ModelConfig& cfg) {
  switch (cfg.model) {
    case Model::Tv:
    case Model::Additive:
      return energy_additive(state.images[0], f, cfg);
    case Model::IcMidpoint:
      return energy_ic_midpoint(state.images[0], state.images[1], f, cfg);
    case Model::TgvPole:
      return energy_tgv_pole(state.images[0], *state.xi, f, cfg);
    case Model::IcLie:
      return energy_ic_lie(state.images[0], state.images[1], f, cfg);
    case Model::TgvLie:
      return energy_tgv_lie(state.images[0], state.images[1], state.images[2],
                            f, cfg);
    default:
      throw IoError("extrinsic models are evaluated by the ADMM solver");
  }
}

State initial_state(Model model, const ManifoldImage& f) {
  State s;
  switch (model) {
    case Model::Tv:
    case Model::Additive:
      s.images = {f};
      break;
    case Model::IcMidpoint: {
      // v = f, w = constant Karcher mean of f
      ManifoldImage w(f.manifold_ptr(), f.n1(), f.n2());
      VectorXd mean = karcher_mean(f.manifold(), f.pts);
      for (int i = 0; i < w.size(); ++i) w.pixel(i) = mean;
      s.images = {f, std::move(w)};
      break;
    }
    case Model::IcLie: {
      ManifoldImage w(f.manifold_ptr(), f.n1(), f.n2());
      require_lie_group(f.manifold());
      VectorXd e(f.manifold().rep_dim());
      f.manifold().group_identity(e);
      for (int i = 0; i < w.size(); ++i) w.pixel(i) = e;
      s.images = {f, std::move(w)};
      break;
    }
    case Model::TgvPole:
      s.images = {f};
      s.xi = intrinsic_gradient(f);
      break;
    case Model::TgvLie:
      s.images = {f, lie_forward_diff(f, Axis::X),
                  lie_forward_diff(f, Axis::Y)};
      break;
    default:
      throw IoError("extrinsic models are initialized by the ADMM solver");
  }
  return s;
}

}  // namespace mvd
