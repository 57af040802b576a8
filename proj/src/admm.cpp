#include "mvd/admm.hpp"

#include <cmath>

#include "mvd/euclidean.hpp"

namespace mvd {

namespace {

// project every pixel group of y onto the ball of radius lambda
void project_ball(const PixelGrid& g, MatrixXd& y, double lambda) {
  for (int i = 0; i < g.size(); ++i) {
    double n = y.col(i).norm();
    if (n > lambda) y.col(i) *= lambda / n;
  }
}

double operator_norm(const std::function<MatrixXd(const MatrixXd&)>& K,
                     const std::function<MatrixXd(const MatrixXd&)>& Kt,
                     int rows, int cols) {
  // deterministic full-spectrum start; constants sit in the nullspace of
  // the difference operators
  MatrixXd x(rows, cols);
  std::uint64_t lcg = 0x9e3779b97f4a7c15ull;
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
      x(i, j) = double(lcg >> 11) / double(1ull << 53) - 0.5;
    }
  x /= x.norm();
  double norm = 1.0;
  for (int it = 0; it < 60; ++it) {
    MatrixXd y = Kt(K(x));
    if (y.norm() == 0) return 1.0;
    norm = std::sqrt(y.norm());
    x = y / y.norm();
  }
  return 1.02 * norm;
}

struct PdhgDuals {
  MatrixXd y1, y2;
};

}  // namespace

MatrixXd embed_image(const ManifoldImage& u) {
  const Manifold& m = u.manifold();
  MatrixXd out(m.embed_dim(), u.size());
  VectorXd e(m.embed_dim());
  for (int i = 0; i < u.size(); ++i) {
    m.embed(u.pixel(i), e);
    out.col(i) = e;
  }
  return out;
}

ManifoldImage project_embedded_image(std::shared_ptr<const Manifold> m,
                                     const PixelGrid& grid,
                                     const MatrixXd& embedded) {
  ManifoldImage out(m, grid.n1, grid.n2);
  VectorXd p(m->rep_dim());
  for (int i = 0; i < grid.size(); ++i) {
    m->project_embedding(embedded.col(i), p);
    out.pixel(i) = p;
  }
  return out;
}

AdmmReport admm_extrinsic(const ManifoldImage& f, const ModelConfig& cfg,
                          const AdmmParams& params, const AdmmCallback& cb) {
  validate(cfg);
  if (!model_is_extrinsic(cfg.model))
    throw IoError("admm_extrinsic expects an ext_* model");
  const Manifold& m = f.manifold();
  if (m.key().kind == ManifoldKind::Spd && !params.allow_spd)
    throw IoError(
        "extrinsic solving on SPD is a non-paper extension; enable it "
        "explicitly");

  const PixelGrid& g = f.grid();
  const int n = m.embed_dim();
  const int N = g.size();
  const double rho = params.penalty;
  const double a = cfg.alpha, b = cfg.beta;

  MatrixXd fe = embed_image(f);

  // primal blocks and duplicated variable
  MatrixXd x1 = fe;                          // u or v
  MatrixXd x2;                               // w (ic) or xi (tgv)
  if (cfg.model == Model::ExtIc) x2 = MatrixXd::Zero(n, N);
  if (cfg.model == Model::ExtTgv) {
    x2 = MatrixXd::Zero(2 * n, N);
    x2.topRows(n) = euc::forward_diff(g, fe, Axis::X);
    x2.bottomRows(n) = euc::forward_diff(g, fe, Axis::Y);
  }
  ManifoldImage z = project_embedded_image(f.manifold_ptr(), g, fe);
  MatrixXd ze = embed_image(z);
  MatrixXd mu = MatrixXd::Zero(n, N);

  // operators of the convex block per model
  auto K = [&](const MatrixXd& p1, const MatrixXd& p2, MatrixXd& y1,
               MatrixXd& y2) {
    switch (cfg.model) {
      case Model::ExtAdditive: {
        y1.resize(2 * n, N);
        y1.topRows(n) = euc::forward_diff(g, p1, Axis::X);
        y1.bottomRows(n) = euc::forward_diff(g, p1, Axis::Y);
        MatrixXd dx = y1.topRows(n), dy = y1.bottomRows(n);
        y2.resize(4 * n, N);
        y2.topRows(n) = euc::backward_diff(g, dx, Axis::X);
        y2.middleRows(n, n) = euc::backward_diff(g, dx, Axis::Y);
        y2.middleRows(2 * n, n) = euc::backward_diff(g, dy, Axis::X);
        y2.bottomRows(n) = euc::backward_diff(g, dy, Axis::Y);
        break;
      }
      case Model::ExtIc: {
        y1.resize(2 * n, N);
        y1.topRows(n) = euc::forward_diff(g, p1, Axis::X);
        y1.bottomRows(n) = euc::forward_diff(g, p1, Axis::Y);
        MatrixXd wx = euc::forward_diff(g, p2, Axis::X);
        MatrixXd wy = euc::forward_diff(g, p2, Axis::Y);
        y2.resize(4 * n, N);
        y2.topRows(n) = euc::backward_diff(g, wx, Axis::X);
        y2.middleRows(n, n) = euc::backward_diff(g, wx, Axis::Y);
        y2.middleRows(2 * n, n) = euc::backward_diff(g, wy, Axis::X);
        y2.bottomRows(n) = euc::backward_diff(g, wy, Axis::Y);
        break;
      }
      case Model::ExtTgv: {
        y1.resize(2 * n, N);
        y1.topRows(n) = euc::forward_diff(g, p1, Axis::X) - p2.topRows(n);
        y1.bottomRows(n) =
            euc::forward_diff(g, p1, Axis::Y) - p2.bottomRows(n);
        y2.resize(4 * n, N);
        y2.topRows(n) = euc::backward_diff(g, p2.topRows(n), Axis::X);
        y2.middleRows(n, n) = euc::backward_diff(g, p2.topRows(n), Axis::Y);
        y2.middleRows(2 * n, n) =
            euc::backward_diff(g, p2.bottomRows(n), Axis::X);
        y2.bottomRows(n) = euc::backward_diff(g, p2.bottomRows(n), Axis::Y);
        break;
      }
      default:
        break;
    }
  };

  auto Kt = [&](const MatrixXd& y1, const MatrixXd& y2, MatrixXd& g1,
                MatrixXd& g2) {
    MatrixXd t1 = euc::adj_forward_diff(g, y1.topRows(n), Axis::X) +
                  euc::adj_forward_diff(g, y1.bottomRows(n), Axis::Y);
    MatrixXd bx = euc::adj_backward_diff(g, y2.topRows(n), Axis::X) +
                  euc::adj_backward_diff(g, y2.middleRows(n, n), Axis::Y);
    MatrixXd by = euc::adj_backward_diff(g, y2.middleRows(2 * n, n), Axis::X) +
                  euc::adj_backward_diff(g, y2.bottomRows(n), Axis::Y);
    switch (cfg.model) {
      case Model::ExtAdditive:
        g1 = t1 + euc::adj_forward_diff(g, bx, Axis::X) +
             euc::adj_forward_diff(g, by, Axis::Y);
        g2.resize(0, 0);
        break;
      case Model::ExtIc:
        g1 = t1;
        g2 = euc::adj_forward_diff(g, bx, Axis::X) +
             euc::adj_forward_diff(g, by, Axis::Y);
        break;
      case Model::ExtTgv:
        g1 = t1;
        g2.resize(2 * n, N);
        g2.topRows(n) = -y1.topRows(n) + bx;
        g2.bottomRows(n) = -y1.bottomRows(n) + by;
        break;
      default:
        break;
    }
  };

  // step sizes from a power estimate of |K|
  double L;
  {
    auto apply = [&](const MatrixXd& x) {
      MatrixXd p1 = x.topRows(n);
      MatrixXd p2 = x.rows() > n ? MatrixXd(x.bottomRows(x.rows() - n))
                                 : MatrixXd();
      MatrixXd y1, y2;
      K(p1, p2, y1, y2);
      MatrixXd stacked(y1.rows() + y2.rows(), N);
      stacked << y1, y2;
      return stacked;
    };
    auto applyT = [&](const MatrixXd& y) {
      MatrixXd g1, g2;
      Kt(y.topRows(2 * n), y.bottomRows(4 * n), g1, g2);
      MatrixXd stacked(g1.rows() + g2.rows(), N);
      if (g2.size() > 0)
        stacked << g1, g2;
      else
        stacked = g1;
      return stacked;
    };
    int rows = n + static_cast<int>(x2.rows());
    L = operator_norm(apply, applyT, rows, N);
    if (L <= 0) L = 1.0;
  }
  const double tau = 0.99 / L;
  const double sigma = 0.99 / L;

  PdhgDuals duals{MatrixXd::Zero(2 * n, N), MatrixXd::Zero(4 * n, N)};

  AdmmReport report;
  report.z = z;
  double best = std::numeric_limits<double>::infinity();

  auto feasible_value = [&](const MatrixXd& zemb) {
    switch (cfg.model) {
      case Model::ExtAdditive:
        return euc::energy_additive(g, zemb, fe, a, b, 0.0);
      case Model::ExtIc: {
        MatrixXd delta = zemb - x1 - x2;
        MatrixXd v = x1 + 0.5 * delta, w = x2 + 0.5 * delta;
        return euc::energy_ic(g, v, w, fe, a, b, 0.0);
      }
      case Model::ExtTgv:
        return euc::energy_tgv(g, zemb, x2, fe, a, b, 0.0, false);
      default:
        return 0.0;
    }
  };

  for (long outer = 0; outer < params.max_iter; ++outer) {
    // convex block via warm-started PDHG
    MatrixXd c = ze - mu;
    MatrixXd p1 = x1, p2 = x2;
    MatrixXd p1_bar = p1, p2_bar = p2;
    for (int it = 0; it < params.inner_iter; ++it) {
      MatrixXd y1, y2;
      K(p1_bar, p2_bar, y1, y2);
      duals.y1 += sigma * y1;
      duals.y2 += sigma * y2;
      project_ball(g, duals.y1, a * b);
      project_ball(g, duals.y2, a * (1 - b));

      MatrixXd g1, g2;
      Kt(duals.y1, duals.y2, g1, g2);
      MatrixXd q1 = p1 - tau * g1;
      MatrixXd q2 = p2.size() > 0 ? MatrixXd(p2 - tau * g2) : MatrixXd();

      MatrixXd p1_new, p2_new;
      switch (cfg.model) {
        case Model::ExtAdditive:
          p1_new = (q1 + tau * (fe + rho * c)) / (1.0 + tau * (1.0 + rho));
          break;
        case Model::ExtIc: {
          // coupled quadratic in (v, w); closed per-pixel solve
          p1_new.resize(n, N);
          p2_new.resize(n, N);
          MatrixXd rhs = fe + rho * c;
          MatrixXd sum = ((q1 + q2) / tau + 2.0 * rhs) /
                         (1.0 / tau + 2.0 * (1.0 + rho));
          MatrixXd diff = q1 - q2;
          p1_new = 0.5 * (sum + diff);
          p2_new = 0.5 * (sum - diff);
          break;
        }
        case Model::ExtTgv:
          p1_new = (q1 + tau * (fe + rho * c)) / (1.0 + tau * (1.0 + rho));
          p2_new = q2;
          break;
        default:
          break;
      }
      p1_bar = 2.0 * p1_new - p1;
      if (p2_new.size() > 0) p2_bar = 2.0 * p2_new - p2;
      p1 = std::move(p1_new);
      if (p2_new.size() > 0) p2 = std::move(p2_new);
    }
    x1 = p1;
    if (p2.size() > 0) x2 = p2;

    // projection step and dual update
    MatrixXd combo = (cfg.model == Model::ExtIc) ? MatrixXd(x1 + x2) : x1;
    MatrixXd ze_prev = ze;
    z = project_embedded_image(f.manifold_ptr(), g, combo + mu);
    ze = embed_image(z);
    mu += combo - ze;

    report.max_membership_error =
        std::max(report.max_membership_error, z.max_membership_error());

    double r = (combo - ze).norm() / std::sqrt(double(N));
    double s = rho * (ze - ze_prev).norm() / std::sqrt(double(N));
    best = std::min(best, feasible_value(ze));
    report.primal_residual.push_back(r);
    report.dual_residual.push_back(s);
    report.best_feasible_trace.push_back(best);
    report.iterations = outer + 1;
    if (cb) cb(outer + 1, best, r, s);
    if (r < params.tol_primal && s < params.tol_dual) {
      report.converged = true;
      break;
    }
  }

  report.z = z;
  report.blocks.push_back(x1);
  if (x2.size() > 0) report.blocks.push_back(x2);
  return report;
}

}  // namespace mvd
