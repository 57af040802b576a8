#include "mvd/descent.hpp"

#include <cmath>

namespace mvd {

namespace {

constexpr int kMaxBacktracks = 60;

State apply_step_points(const State& state, const GradientBundle& grad,
                        double step) {
  State out = state;
  for (size_t img = 0; img < state.images.size(); ++img) {
    const Manifold& m = state.images[img].manifold();
    VectorXd v(m.rep_dim());
    for (int i = 0; i < state.images[img].size(); ++i) {
      v = -step * grad.images[img].col(i);
      m.exp(state.images[img].pixel(i), v, out.images[img].pixel(i));
    }
  }
  return out;
}

double max_point_change(const State& a, const State& b) {
  double worst = 0;
  for (size_t img = 0; img < a.images.size(); ++img) {
    const Manifold& m = a.images[img].manifold();
    for (int i = 0; i < a.images[img].size(); ++i)
      worst =
          std::max(worst, m.dist(a.images[img].pixel(i), b.images[img].pixel(i)));
  }
  return worst;
}

}  // namespace

DescentParams default_params(const ManifoldImage& f) {
  DescentParams p;
  bool signal = f.n1() == 1 || f.n2() == 1;
  p.delta_stop = signal ? 1e-10 : 1e-8;
  p.max_iter = signal ? 1000000 : 100000;
  return p;
}

SolverReport gradient_descent(State init, const ManifoldImage& f,
                              const ModelConfig& cfg,
                              const DescentParams& params,
                              const ProgressCallback& cb) {
  validate(cfg);
  if (!(cfg.epsilon > 0))
    throw IoError("gradient descent needs a positive epsilon");
  SolverReport report;
  State state = std::move(init);
  EnergyValue ev = energy(state, f, cfg);
  report.energy_trace.push_back(ev.total);

  for (long r = 0; r < params.max_iter; ++r) {
    GradientBundle grad = grad_energy(state, f, cfg);
    double n2 = bundle_norm_sq(state, grad);

    int l = 0;
    State cand;
    EnergyValue cand_ev;
    bool accepted = false;
    for (; l <= kMaxBacktracks; ++l) {
      double step = params.sigma * std::pow(params.rho, l);
      cand = apply_step_points(state, grad, step);
      cand_ev = energy(cand, f, cfg);
      if (ev.total - params.c * step * n2 >= cand_ev.total) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.line_search_stall = true;
      report.stop_reason = StopReason::MaxChange;
      break;
    }

    double change = max_point_change(state, cand);
    state = std::move(cand);
    ev = cand_ev;
    report.energy_trace.push_back(ev.total);
    report.max_change_trace.push_back(change);
    report.accepted_steps.push_back(params.sigma * std::pow(params.rho, l));
    report.grad_norm_sq_trace.push_back(n2);
    report.iterations = r + 1;
    if (cb && (r % params.log_every == 0)) cb(r + 1, ev.total, change);
    if (change < params.delta_stop) {
      report.stop_reason = StopReason::MaxChange;
      break;
    }
    report.stop_reason = StopReason::MaxIter;
  }
  report.final_state = std::move(state);
  return report;
}

SolverReport gradient_descent_tangent_bundle(State init, const ManifoldImage& f,
                                             const ModelConfig& cfg,
                                             const DescentParams& params,
                                             const ProgressCallback& cb) {
  validate(cfg);
  if (!(cfg.epsilon > 0))
    throw IoError("gradient descent needs a positive epsilon");
  if (!init.xi) throw IoError("tangent-bundle descent needs a field state");

  SolverReport report;
  State state = std::move(init);
  EnergyValue ev = energy(state, f, cfg);
  report.energy_trace.push_back(ev.total);
  const Manifold& m = f.manifold();
  const int rep = m.rep_dim();

  for (long r = 0; r < params.max_iter; ++r) {
    GradientBundle grad = grad_energy(state, f, cfg);
    // descent directions v (points) and b (field)
    double n2 = bundle_norm_sq(state, grad);

    int l = 0;
    bool accepted = false;
    State cand;
    EnergyValue cand_ev;
    double step = 0;
    for (; l <= kMaxBacktracks; ++l) {
      step = params.sigma * std::pow(params.rho, l);
      cand = state;
      const ManifoldImage& u = state.images[0];
      ManifoldImage& un = cand.images[0];
      VectorXd dir(rep), moved(rep), upd(rep);
      for (int i = 0; i < u.size(); ++i) {
        dir = -step * grad.images[0].col(i);
        m.exp(u.pixel(i), dir, un.pixel(i));
        for (int k = 0; k < 2; ++k) {
          upd = state.xi->component(i, k) -
                step * grad.xi->col(i).segment(k * rep, rep);
          m.transport_along(u.pixel(i), dir, 1.0, upd, moved);
          cand.xi->component(i, k) = moved;
        }
      }
      cand.xi->base() = un;
      cand_ev = energy(cand, f, cfg);
      if (cand_ev.total <= ev.total - params.c * step * n2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.line_search_stall = true;
      report.stop_reason = StopReason::MaxChange;
      break;
    }

    // movement: point distance plus the linear field update magnitude
    double change = 0;
    const ManifoldImage& u = state.images[0];
    for (int i = 0; i < u.size(); ++i) {
      change = std::max(change, m.dist(u.pixel(i), cand.images[0].pixel(i)));
      for (int k = 0; k < 2; ++k) {
        VectorXd b = grad.xi->col(i).segment(k * rep, rep);
        change = std::max(change, step * m.norm(u.pixel(i), b));
      }
    }
    state = std::move(cand);
    ev = cand_ev;
    report.energy_trace.push_back(ev.total);
    report.max_change_trace.push_back(change);
    report.accepted_steps.push_back(step);
    report.grad_norm_sq_trace.push_back(n2);
    report.iterations = r + 1;
    if (cb && (r % params.log_every == 0)) cb(r + 1, ev.total, change);
    if (change < params.delta_stop) {
      report.stop_reason = StopReason::MaxChange;
      break;
    }
    report.stop_reason = StopReason::MaxIter;
  }
  report.final_state = std::move(state);
  return report;
}

SolverReport solve_intrinsic(State init, const ManifoldImage& f,
                             const ModelConfig& cfg,
                             const DescentParams& params,
                             const ProgressCallback& cb) {
  if (cfg.model == Model::TgvPole)
    return gradient_descent_tangent_bundle(std::move(init), f, cfg, params, cb);
  return gradient_descent(std::move(init), f, cfg, params, cb);
}

}  // namespace mvd
