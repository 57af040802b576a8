#include "mvd/euclidean.hpp"

namespace mvd::euc {

namespace {

double sq(double t) { return t * t; }

inline double group_weight(double s, double eps) {
  return 1.0 / (2.0 * std::sqrt(s + eps * eps));
}

// second-order stencils with the composed boundary rules; returns whether
// the stencil is active at (i1, i2)
struct Stencils {
  const PixelGrid& g;

  bool xx(int i1, int i2) const { return is_interior(g, i1, i2, Axis::X); }
  bool yy(int i1, int i2) const { return is_interior(g, i1, i2, Axis::Y); }
  bool xy(int i1, int i2) const { return has_mixed_window(g, i1, i2, Axis::X); }
  bool yx(int i1, int i2) const { return has_mixed_window(g, i1, i2, Axis::Y); }
};

}  // namespace

MatrixXd forward_diff(const PixelGrid& g, const MatrixXd& u, Axis axis) {
  MatrixXd out = MatrixXd::Zero(u.rows(), u.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      if (!has_forward(g, i1, i2, axis)) continue;
      int i = g.index(i1, i2);
      int j = axis == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
      out.col(i) = u.col(j) - u.col(i);
    }
  return out;
}

MatrixXd backward_diff(const PixelGrid& g, const MatrixXd& u, Axis axis) {
  MatrixXd out = MatrixXd::Zero(u.rows(), u.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      if (!is_interior(g, i1, i2, axis)) continue;
      int i = g.index(i1, i2);
      int j = axis == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
      out.col(i) = u.col(i) - u.col(j);
    }
  return out;
}

MatrixXd adj_forward_diff(const PixelGrid& g, const MatrixXd& y, Axis axis) {
  MatrixXd out = MatrixXd::Zero(y.rows(), y.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      if (!has_forward(g, i1, i2, axis)) continue;
      int i = g.index(i1, i2);
      int j = axis == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
      out.col(j) += y.col(i);
      out.col(i) -= y.col(i);
    }
  return out;
}

MatrixXd adj_backward_diff(const PixelGrid& g, const MatrixXd& y, Axis axis) {
  MatrixXd out = MatrixXd::Zero(y.rows(), y.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      if (!is_interior(g, i1, i2, axis)) continue;
      int i = g.index(i1, i2);
      int j = axis == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
      out.col(i) += y.col(i);
      out.col(j) -= y.col(i);
    }
  return out;
}

double data_term(const MatrixXd& u, const MatrixXd& f) {
  return 0.5 * (f - u).squaredNorm();
}

MatrixXd grad_data_term(const MatrixXd& u, const MatrixXd& f) {
  return u - f;
}

double tv(const PixelGrid& g, const MatrixXd& u, double eps) {
  double total = 0;
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s = 0;
      if (g.contains(i1 + 1, i2))
        s += (u.col(g.index(i1 + 1, i2)) - u.col(i)).squaredNorm();
      if (g.contains(i1, i2 + 1))
        s += (u.col(g.index(i1, i2 + 1)) - u.col(i)).squaredNorm();
      total += std::sqrt(s + sq(eps));
    }
  return total;
}

MatrixXd grad_tv(const PixelGrid& g, const MatrixXd& u, double eps) {
  MatrixXd grad = MatrixXd::Zero(u.rows(), u.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s = 0;
      int jx = -1, jy = -1;
      if (g.contains(i1 + 1, i2)) {
        jx = g.index(i1 + 1, i2);
        s += (u.col(jx) - u.col(i)).squaredNorm();
      }
      if (g.contains(i1, i2 + 1)) {
        jy = g.index(i1, i2 + 1);
        s += (u.col(jy) - u.col(i)).squaredNorm();
      }
      double w = group_weight(s, eps);
      if (jx >= 0) {
        grad.col(i) -= 2.0 * w * (u.col(jx) - u.col(i));
        grad.col(jx) += 2.0 * w * (u.col(jx) - u.col(i));
      }
      if (jy >= 0) {
        grad.col(i) -= 2.0 * w * (u.col(jy) - u.col(i));
        grad.col(jy) += 2.0 * w * (u.col(jy) - u.col(i));
      }
    }
  return grad;
}

double tv2(const PixelGrid& g, const MatrixXd& u, double eps, double scale) {
  Stencils st{g};
  double total = 0;
  const double c2 = sq(scale);
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s = 0;
      if (st.xx(i1, i2))
        s += c2 * (u.col(g.index(i1 - 1, i2)) - 2 * u.col(i) +
                   u.col(g.index(i1 + 1, i2)))
                      .squaredNorm();
      if (st.yy(i1, i2))
        s += c2 * (u.col(g.index(i1, i2 - 1)) - 2 * u.col(i) +
                   u.col(g.index(i1, i2 + 1)))
                      .squaredNorm();
      if (st.xy(i1, i2))
        s += c2 * (u.col(g.index(i1 + 1, i2)) - u.col(i) -
                   u.col(g.index(i1 + 1, i2 - 1)) + u.col(g.index(i1, i2 - 1)))
                      .squaredNorm();
      if (st.yx(i1, i2))
        s += c2 * (u.col(g.index(i1, i2 + 1)) - u.col(i) -
                   u.col(g.index(i1 - 1, i2 + 1)) + u.col(g.index(i1 - 1, i2)))
                      .squaredNorm();
      total += std::sqrt(s + sq(eps));
    }
  return total;
}

MatrixXd grad_tv2(const PixelGrid& g, const MatrixXd& u, double eps,
                  double scale) {
  Stencils st{g};
  MatrixXd grad = MatrixXd::Zero(u.rows(), u.cols());
  const double c2 = sq(scale);
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s = 0;
      VectorXd dxx, dyy, dxy, dyx;
      if (st.xx(i1, i2)) {
        dxx = u.col(g.index(i1 - 1, i2)) - 2 * u.col(i) +
              u.col(g.index(i1 + 1, i2));
        s += c2 * dxx.squaredNorm();
      }
      if (st.yy(i1, i2)) {
        dyy = u.col(g.index(i1, i2 - 1)) - 2 * u.col(i) +
              u.col(g.index(i1, i2 + 1));
        s += c2 * dyy.squaredNorm();
      }
      if (st.xy(i1, i2)) {
        dxy = u.col(g.index(i1 + 1, i2)) - u.col(i) -
              u.col(g.index(i1 + 1, i2 - 1)) + u.col(g.index(i1, i2 - 1));
        s += c2 * dxy.squaredNorm();
      }
      if (st.yx(i1, i2)) {
        dyx = u.col(g.index(i1, i2 + 1)) - u.col(i) -
              u.col(g.index(i1 - 1, i2 + 1)) + u.col(g.index(i1 - 1, i2));
        s += c2 * dyx.squaredNorm();
      }
      double w = 2.0 * c2 * group_weight(s, eps);
      if (st.xx(i1, i2)) {
        grad.col(g.index(i1 - 1, i2)) += w * dxx;
        grad.col(i) -= 2.0 * w * dxx;
        grad.col(g.index(i1 + 1, i2)) += w * dxx;
      }
      if (st.yy(i1, i2)) {
        grad.col(g.index(i1, i2 - 1)) += w * dyy;
        grad.col(i) -= 2.0 * w * dyy;
        grad.col(g.index(i1, i2 + 1)) += w * dyy;
      }
      if (st.xy(i1, i2)) {
        grad.col(g.index(i1 + 1, i2)) += w * dxy;
        grad.col(i) -= w * dxy;
        grad.col(g.index(i1 + 1, i2 - 1)) -= w * dxy;
        grad.col(g.index(i1, i2 - 1)) += w * dxy;
      }
      if (st.yx(i1, i2)) {
        grad.col(g.index(i1, i2 + 1)) += w * dyx;
        grad.col(i) -= w * dyx;
        grad.col(g.index(i1 - 1, i2 + 1)) -= w * dyx;
        grad.col(g.index(i1 - 1, i2)) += w * dyx;
      }
    }
  return grad;
}

double tgv_first(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                 double eps) {
  const int n = static_cast<int>(u.rows());
  MatrixXd dx = forward_diff(g, u, Axis::X);
  MatrixXd dy = forward_diff(g, u, Axis::Y);
  double total = 0;
  for (int i = 0; i < g.size(); ++i) {
    double s = (dx.col(i) - xi.col(i).head(n)).squaredNorm() +
               (dy.col(i) - xi.col(i).tail(n)).squaredNorm();
    total += std::sqrt(s + sq(eps));
  }
  return total;
}

void grad_tgv_first(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                    double eps, MatrixXd& gu, MatrixXd& gxi) {
  const int n = static_cast<int>(u.rows());
  gu.setZero(u.rows(), u.cols());
  gxi.setZero(xi.rows(), xi.cols());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      int jx = g.contains(i1 + 1, i2) ? g.index(i1 + 1, i2) : -1;
      int jy = g.contains(i1, i2 + 1) ? g.index(i1, i2 + 1) : -1;
      VectorXd rx = -xi.col(i).head(n);
      VectorXd ry = -xi.col(i).tail(n);
      if (jx >= 0) rx += u.col(jx) - u.col(i);
      if (jy >= 0) ry += u.col(jy) - u.col(i);
      double w =
          2.0 * group_weight(rx.squaredNorm() + ry.squaredNorm(), eps);
      gxi.col(i).head(n) -= w * rx;
      gxi.col(i).tail(n) -= w * ry;
      if (jx >= 0) {
        gu.col(jx) += w * rx;
        gu.col(i) -= w * rx;
      }
      if (jy >= 0) {
        gu.col(jy) += w * ry;
        gu.col(i) -= w * ry;
      }
    }
}

double tgv_second(const PixelGrid& g, const MatrixXd& xi, double eps,
                  bool symmetric) {
  const int n = static_cast<int>(xi.rows()) / 2;
  MatrixXd x1 = xi.topRows(n), x2 = xi.bottomRows(n);
  MatrixXd d1x = backward_diff(g, x1, Axis::X);
  MatrixXd d1y = backward_diff(g, x1, Axis::Y);
  MatrixXd d2x = backward_diff(g, x2, Axis::X);
  MatrixXd d2y = backward_diff(g, x2, Axis::Y);
  double total = 0;
  for (int i = 0; i < g.size(); ++i) {
    double s;
    if (!symmetric) {
      s = d1x.col(i).squaredNorm() + d1y.col(i).squaredNorm() +
          d2x.col(i).squaredNorm() + d2y.col(i).squaredNorm();
    } else {
      s = d1x.col(i).squaredNorm() + d2y.col(i).squaredNorm() +
          (0.5 * (d1y.col(i) + d2x.col(i))).squaredNorm();
    }
    total += std::sqrt(s + sq(eps));
  }
  return total;
}

MatrixXd grad_tgv_second(const PixelGrid& g, const MatrixXd& xi, double eps,
                         bool symmetric) {
  const int n = static_cast<int>(xi.rows()) / 2;
  MatrixXd x1 = xi.topRows(n), x2 = xi.bottomRows(n);
  MatrixXd d1x = backward_diff(g, x1, Axis::X);
  MatrixXd d1y = backward_diff(g, x1, Axis::Y);
  MatrixXd d2x = backward_diff(g, x2, Axis::X);
  MatrixXd d2y = backward_diff(g, x2, Axis::Y);
  MatrixXd grad = MatrixXd::Zero(xi.rows(), xi.cols());

  auto scatter = [&](int i, int i1, int i2, Axis a, int row_block,
                     const VectorXd& piece) {
    if (!is_interior(g, i1, i2, a)) return;
    int j = a == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
    grad.col(i).segment(row_block * n, n) += piece;
    grad.col(j).segment(row_block * n, n) -= piece;
  };

  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s;
      if (!symmetric) {
        s = d1x.col(i).squaredNorm() + d1y.col(i).squaredNorm() +
            d2x.col(i).squaredNorm() + d2y.col(i).squaredNorm();
        double w = 2.0 * group_weight(s, eps);
        scatter(i, i1, i2, Axis::X, 0, VectorXd(w * d1x.col(i)));
        scatter(i, i1, i2, Axis::Y, 0, VectorXd(w * d1y.col(i)));
        scatter(i, i1, i2, Axis::X, 1, VectorXd(w * d2x.col(i)));
        scatter(i, i1, i2, Axis::Y, 1, VectorXd(w * d2y.col(i)));
      } else {
        VectorXd mid = 0.5 * (d1y.col(i) + d2x.col(i));
        s = d1x.col(i).squaredNorm() + d2y.col(i).squaredNorm() +
            mid.squaredNorm();
        double w = 2.0 * group_weight(s, eps);
        scatter(i, i1, i2, Axis::X, 0, VectorXd(w * d1x.col(i)));
        scatter(i, i1, i2, Axis::Y, 1, VectorXd(w * d2y.col(i)));
        scatter(i, i1, i2, Axis::Y, 0, VectorXd(0.5 * w * mid));
        scatter(i, i1, i2, Axis::X, 1, VectorXd(0.5 * w * mid));
      }
    }
  return grad;
}

double energy_additive(const PixelGrid& g, const MatrixXd& u,
                       const MatrixXd& f, double alpha, double beta,
                       double eps) {
  return data_term(u, f) +
         alpha * (beta * tv(g, u, eps) + (1 - beta) * tv2(g, u, eps, 1.0));
}

double energy_ic(const PixelGrid& g, const MatrixXd& v, const MatrixXd& w,
                 const MatrixXd& f, double alpha, double beta, double eps) {
  return 0.5 * (f - v - w).squaredNorm() +
         alpha * (beta * tv(g, v, eps) + (1 - beta) * tv2(g, w, eps, 1.0));
}

double energy_tgv(const PixelGrid& g, const MatrixXd& u, const MatrixXd& xi,
                  const MatrixXd& f, double alpha, double beta, double eps,
                  bool symmetric) {
  return data_term(u, f) +
         alpha * (beta * tgv_first(g, u, xi, eps) +
                  (1 - beta) * tgv_second(g, xi, eps, symmetric));
}

}  // namespace mvd::euc
