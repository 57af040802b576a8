#include "mvd/gradients.hpp"

#include <cmath>

#include "mvd/jacobi.hpp"
#include "mvd/parallel.hpp"
#include "mvd/transport.hpp"

namespace mvd {

namespace {

double sq(double t) { return t * t; }

struct Workspace {
  VectorXd a, b, c, d, e;
  explicit Workspace(int rep) : a(rep), b(rep), c(rep), d(rep), e(rep) {}
};

// ---- first order (shared by every intrinsic model) ---------------------

void add_grad_data(const ManifoldImage& u, const ManifoldImage& f,
                   MatrixXd& grad) {
  const Manifold& m = u.manifold();
  VectorXd lg(m.rep_dim());
  for (int i = 0; i < u.size(); ++i) {
    m.log(u.pixel(i), f.pixel(i), lg);
    grad.col(i) -= lg;
  }
}

void add_grad_tv(const ManifoldImage& u, double eps, double factor,
                 MatrixXd& grad) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  VectorXd lg(m.rep_dim());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      int jx = g.contains(i1 + 1, i2) ? g.index(i1 + 1, i2) : -1;
      int jy = g.contains(i1, i2 + 1) ? g.index(i1, i2 + 1) : -1;
      double s = 0;
      if (jx >= 0) s += sq(m.dist(u.pixel(i), u.pixel(jx)));
      if (jy >= 0) s += sq(m.dist(u.pixel(i), u.pixel(jy)));
      double w = factor / (2.0 * std::sqrt(s + sq(eps)));
      for (int j : {jx, jy}) {
        if (j < 0) continue;
        m.log(u.pixel(i), u.pixel(j), lg);
        grad.col(i) -= 2.0 * w * lg;
        m.log(u.pixel(j), u.pixel(i), lg);
        grad.col(j) -= 2.0 * w * lg;
      }
    }
}

// ---- midpoint second order ---------------------------------------------

// gradient pieces of d2(a, b, c)^2 = dist^2(gamma(a,c;1/2), b)
struct D2Grads {
  VectorXd wrt_a, wrt_b, wrt_c;
};

D2Grads grad_d2_sq(const Manifold& m, CVec a, CVec b, CVec c, Workspace& ws) {
  const int rep = m.rep_dim();
  D2Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  VectorXd& mid = ws.a;
  m.geodesic(a, c, 0.5, mid);
  VectorXd& inner = ws.b;
  m.log(mid, b, inner);
  inner *= -2.0;  // gradient of dist^2(., b) at the midpoint
  jac::geo_x(m, a, c, 0.5, inner, out.wrt_a, true);
  jac::geo_y(m, a, c, 0.5, inner, out.wrt_c, true);
  m.log(b, mid, ws.c);
  out.wrt_b = -2.0 * ws.c;
  return out;
}

// gradient pieces of d11(x1,x2,x3,x4)^2 = dist^2(mid(x1,x3), mid(x2,x4))
struct D11Grads {
  VectorXd wrt_x1, wrt_x2, wrt_x3, wrt_x4;
};

D11Grads grad_d11_sq(const Manifold& m, CVec x1, CVec x2, CVec x3, CVec x4,
                     Workspace& ws) {
  const int rep = m.rep_dim();
  D11Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  VectorXd& c = ws.a;
  VectorXd& ct = ws.b;
  m.geodesic(x1, x3, 0.5, c);
  m.geodesic(x2, x4, 0.5, ct);
  VectorXd& inner_c = ws.c;
  m.log(c, ct, inner_c);
  inner_c *= -2.0;
  jac::geo_x(m, x1, x3, 0.5, inner_c, out.wrt_x1, true);
  jac::geo_y(m, x1, x3, 0.5, inner_c, out.wrt_x3, true);
  VectorXd& inner_ct = ws.d;
  m.log(ct, c, inner_ct);
  inner_ct *= -2.0;
  jac::geo_x(m, x2, x4, 0.5, inner_ct, out.wrt_x2, true);
  jac::geo_y(m, x2, x4, 0.5, inner_ct, out.wrt_x4, true);
  return out;
}

void add_grad_tv2_int(const ManifoldImage& u, double eps, double factor,
                      MatrixXd& grad) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  const int rep = m.rep_dim();
  SecondDiffs d = second_diffs_image(u);

  // per-pixel stencil gradients computed in parallel, scattered in order
  MatrixXd slot_xx(3 * rep, g.size()), slot_yy(3 * rep, g.size());
  MatrixXd slot_xy(4 * rep, g.size()), slot_yx(4 * rep, g.size());
  VectorXd weight(g.size());
  parallel_ranges(g.size(), [&](int begin, int end) {
    Workspace ws(rep);
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      double s = sq(d.dxx[i]) + sq(d.dyy[i]) + sq(d.dxy[i]) + sq(d.dyx[i]);
      weight[i] = factor / (2.0 * std::sqrt(s + sq(eps)));
      if (weight[i] == 0.0) continue;
      if (is_interior(g, i1, i2, Axis::X)) {
        D2Grads gr = grad_d2_sq(m, u.pixel(i1 + 1, i2), u.pixel(i),
                                u.pixel(i1 - 1, i2), ws);
        slot_xx.col(i) << gr.wrt_a, gr.wrt_b, gr.wrt_c;
      }
      if (is_interior(g, i1, i2, Axis::Y)) {
        D2Grads gr = grad_d2_sq(m, u.pixel(i1, i2 + 1), u.pixel(i),
                                u.pixel(i1, i2 - 1), ws);
        slot_yy.col(i) << gr.wrt_a, gr.wrt_b, gr.wrt_c;
      }
      if (has_mixed_window(g, i1, i2, Axis::X)) {
        // diagonal pairing, matching second_diffs_image
        D11Grads gr = grad_d11_sq(m, u.pixel(i), u.pixel(i1 + 1, i2),
                                  u.pixel(i1 + 1, i2 - 1), u.pixel(i1, i2 - 1),
                                  ws);
        slot_xy.col(i) << gr.wrt_x1, gr.wrt_x2, gr.wrt_x3, gr.wrt_x4;
      }
      if (has_mixed_window(g, i1, i2, Axis::Y)) {
        D11Grads gr = grad_d11_sq(m, u.pixel(i), u.pixel(i1, i2 + 1),
                                  u.pixel(i1 - 1, i2 + 1), u.pixel(i1 - 1, i2),
                                  ws);
        slot_yx.col(i) << gr.wrt_x1, gr.wrt_x2, gr.wrt_x3, gr.wrt_x4;
      }
    }
  });

  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double w = weight[i];
      if (w == 0.0) continue;
      if (is_interior(g, i1, i2, Axis::X)) {
        grad.col(g.index(i1 + 1, i2)) += w * slot_xx.col(i).segment(0, rep);
        grad.col(i) += w * slot_xx.col(i).segment(rep, rep);
        grad.col(g.index(i1 - 1, i2)) += w * slot_xx.col(i).segment(2 * rep, rep);
      }
      if (is_interior(g, i1, i2, Axis::Y)) {
        grad.col(g.index(i1, i2 + 1)) += w * slot_yy.col(i).segment(0, rep);
        grad.col(i) += w * slot_yy.col(i).segment(rep, rep);
        grad.col(g.index(i1, i2 - 1)) += w * slot_yy.col(i).segment(2 * rep, rep);
      }
      if (has_mixed_window(g, i1, i2, Axis::X)) {
        grad.col(i) += w * slot_xy.col(i).segment(0, rep);
        grad.col(g.index(i1 + 1, i2)) += w * slot_xy.col(i).segment(rep, rep);
        grad.col(g.index(i1 + 1, i2 - 1)) +=
            w * slot_xy.col(i).segment(2 * rep, rep);
        grad.col(g.index(i1, i2 - 1)) += w * slot_xy.col(i).segment(3 * rep, rep);
      }
      if (has_mixed_window(g, i1, i2, Axis::Y)) {
        grad.col(i) += w * slot_yx.col(i).segment(0, rep);
        grad.col(g.index(i1, i2 + 1)) += w * slot_yx.col(i).segment(rep, rep);
        grad.col(g.index(i1 - 1, i2 + 1)) +=
            w * slot_yx.col(i).segment(2 * rep, rep);
        grad.col(g.index(i1 - 1, i2)) += w * slot_yx.col(i).segment(3 * rep, rep);
      }
    }
}

// ---- Lie second order ----------------------------------------------------

// dist^2(u_p o u_i^-1 o u_m o u_i^-1, e): gradients through the
// bi-invariance identities; the center one applies the translation
// differentials on raw representatives.
struct LieD2Grads {
  VectorXd wrt_p, wrt_i, wrt_m;
};

LieD2Grads grad_lie_dxx_sq(const Manifold& m, CVec up, CVec ui, CVec um,
                           Workspace& ws) {
  const int rep = m.rep_dim();
  LieD2Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  VectorXd& inv = ws.a;
  VectorXd& t = ws.b;
  VectorXd& mid = ws.c;

  // mid = u_i o u_m^-1 o u_i  (raw products keep tangent chains coherent)
  m.inverse_raw(um, inv);
  m.compose_raw(ui, inv, t);
  m.compose_raw(t, ui, mid);
  VectorXd& l = ws.d;
  m.log(mid, up, l);

  m.inverse_raw(ui, inv);
  VectorXd& a = ws.e;
  m.compose_raw(um, inv, a);  // u_m o u_i^-1
  VectorXd t1(rep), t2(rep);
  m.translate_left(a, l, t1);
  m.compose_raw(inv, um, a);  // u_i^-1 o u_m
  m.translate_right(a, l, t2);
  out.wrt_i = -2.0 * (t1 + t2);

  out.wrt_p.resize(rep);
  m.log(up, mid, out.wrt_p);
  out.wrt_p *= -2.0;

  // dist is symmetric under swapping p and m
  m.inverse_raw(up, inv);
  m.compose_raw(ui, inv, t);
  m.compose_raw(t, ui, mid);
  m.log(um, mid, out.wrt_m);
  out.wrt_m *= -2.0;
  return out;
}

// dist^2(a o b^-1 o c o d^-1, e): one gradient per distinct argument.
struct LieD11Grads {
  VectorXd wrt_a, wrt_b, wrt_c, wrt_d;
};

LieD11Grads grad_lie_dxy_sq(const Manifold& m, CVec a, CVec b, CVec c, CVec d,
                            Workspace& ws) {
  const int rep = m.rep_dim();
  LieD11Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  VectorXd& inv = ws.a;
  VectorXd& t = ws.b;
  VectorXd& arg = ws.c;

  auto neg2log = [&](CVec base, CVec target, VectorXd& res) {
    m.log(base, target, res);
    res *= -2.0;
  };

  // wrt b (center): -2 log_b(c o d^-1 o a)
  m.inverse_raw(d, inv);
  m.compose_raw(c, inv, t);
  m.compose_raw(t, a, arg);
  neg2log(b, arg, out.wrt_b);
  // wrt a: -2 log_a(d o c^-1 o b)
  m.inverse_raw(c, inv);
  m.compose_raw(d, inv, t);
  m.compose_raw(t, b, arg);
  neg2log(a, arg, out.wrt_a);
  // wrt c: -2 log_c(b o a^-1 o d)
  m.inverse_raw(a, inv);
  m.compose_raw(b, inv, t);
  m.compose_raw(t, d, arg);
  neg2log(c, arg, out.wrt_c);
  // wrt d: -2 log_d(a o b^-1 o c)
  m.inverse_raw(b, inv);
  m.compose_raw(a, inv, t);
  m.compose_raw(t, c, arg);
  neg2log(d, arg, out.wrt_d);
  return out;
}

void add_grad_tv2_lie(const ManifoldImage& u, double eps, double factor,
                      MatrixXd& grad) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  Workspace ws(m.rep_dim());
  LieSecondDiffs d = lie_second_diffs(u);
  VectorXd e(m.rep_dim());
  m.group_identity(e);
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      double s = sq(m.dist(d.dxx.pixel(i), e)) +
                 sq(m.dist(d.dyy.pixel(i), e)) +
                 sq(m.dist(d.dxy.pixel(i), e)) + sq(m.dist(d.dyx.pixel(i), e));
      double w = factor / (2.0 * std::sqrt(s + sq(eps)));
      if (w == 0.0) continue;
      if (is_interior(g, i1, i2, Axis::X)) {
        int ip = g.index(i1 + 1, i2), im = g.index(i1 - 1, i2);
        LieD2Grads gr =
            grad_lie_dxx_sq(m, u.pixel(ip), u.pixel(i), u.pixel(im), ws);
        grad.col(ip) += w * gr.wrt_p;
        grad.col(i) += w * gr.wrt_i;
        grad.col(im) += w * gr.wrt_m;
      }
      if (is_interior(g, i1, i2, Axis::Y)) {
        int ip = g.index(i1, i2 + 1), im = g.index(i1, i2 - 1);
        LieD2Grads gr =
            grad_lie_dxx_sq(m, u.pixel(ip), u.pixel(i), u.pixel(im), ws);
        grad.col(ip) += w * gr.wrt_p;
        grad.col(i) += w * gr.wrt_i;
        grad.col(im) += w * gr.wrt_m;
      }
      if (has_mixed_window(g, i1, i2, Axis::X)) {
        LieD11Grads gr = grad_lie_dxy_sq(
            m, u.pixel(i1 + 1, i2), u.pixel(i), u.pixel(i1, i2 - 1),
            u.pixel(i1 + 1, i2 - 1), ws);
        grad.col(g.index(i1 + 1, i2)) += w * gr.wrt_a;
        grad.col(i) += w * gr.wrt_b;
        grad.col(g.index(i1, i2 - 1)) += w * gr.wrt_c;
        grad.col(g.index(i1 + 1, i2 - 1)) += w * gr.wrt_d;
      }
      if (has_mixed_window(g, i1, i2, Axis::Y)) {
        LieD11Grads gr = grad_lie_dxy_sq(
            m, u.pixel(i1, i2 + 1), u.pixel(i), u.pixel(i1 - 1, i2),
            u.pixel(i1 - 1, i2 + 1), ws);
        grad.col(g.index(i1, i2 + 1)) += w * gr.wrt_a;
        grad.col(i) += w * gr.wrt_b;
        grad.col(g.index(i1 - 1, i2)) += w * gr.wrt_c;
        grad.col(g.index(i1 - 1, i2 + 1)) += w * gr.wrt_d;
      }
    }
}

// ---- per-model assemblies ------------------------------------------------

GradientBundle grad_additive(const ManifoldImage& u, const ManifoldImage& f,
                             const ModelConfig& cfg) {
  GradientBundle out;
  out.images.emplace_back(MatrixXd::Zero(u.pts.rows(), u.pts.cols()));
  add_grad_data(u, f, out.images[0]);
  add_grad_tv(u, cfg.epsilon, cfg.alpha * cfg.beta, out.images[0]);
  if (cfg.beta < 1.0)
    add_grad_tv2_int(u, cfg.epsilon, cfg.alpha * (1 - cfg.beta),
                     out.images[0]);
  return out;
}

GradientBundle grad_ic_midpoint(const ManifoldImage& v, const ManifoldImage& w,
                                const ManifoldImage& f,
                                const ModelConfig& cfg) {
  const Manifold& m = v.manifold();
  GradientBundle out;
  out.images.emplace_back(MatrixXd::Zero(v.pts.rows(), v.pts.cols()));
  out.images.emplace_back(MatrixXd::Zero(w.pts.rows(), w.pts.cols()));
  const int rep = m.rep_dim();
  VectorXd mid(rep), inner(rep), gv(rep), gw(rep);
  for (int i = 0; i < v.size(); ++i) {
    m.geodesic(v.pixel(i), w.pixel(i), 0.5, mid);
    m.log(mid, f.pixel(i), inner);
    inner *= -1.0;  // d/dmid of (1/2) dist^2(mid, f)
    jac::geo_x(m, v.pixel(i), w.pixel(i), 0.5, inner, gv, true);
    jac::geo_y(m, v.pixel(i), w.pixel(i), 0.5, inner, gw, true);
    out.images[0].col(i) += gv;
    out.images[1].col(i) += gw;
  }
  add_grad_tv(v, cfg.epsilon, cfg.alpha * cfg.beta, out.images[0]);
  add_grad_tv2_int(w, cfg.epsilon, cfg.alpha * (1 - cfg.beta), out.images[1]);
  return out;
}

GradientBundle grad_ic_lie(const ManifoldImage& v, const ManifoldImage& w,
                           const ManifoldImage& f, const ModelConfig& cfg) {
  const Manifold& m = v.manifold();
  require_lie_group(m);
  GradientBundle out;
  out.images.emplace_back(MatrixXd::Zero(v.pts.rows(), v.pts.cols()));
  out.images.emplace_back(MatrixXd::Zero(w.pts.rows(), w.pts.cols()));
  const int rep = m.rep_dim();
  VectorXd inv(rep), arg(rep), lg(rep);
  for (int i = 0; i < v.size(); ++i) {
    // right invariance: dist(f, v o w) = dist(f o w^-1, v)
    m.inverse(w.pixel(i), inv);
    m.compose(f.pixel(i), inv, arg);
    m.log(v.pixel(i), arg, lg);
    out.images[0].col(i) -= lg;
    // left invariance: dist(f, v o w) = dist(v^-1 o f, w)
    m.inverse(v.pixel(i), inv);
    m.compose(inv, f.pixel(i), arg);
    m.log(w.pixel(i), arg, lg);
    out.images[1].col(i) -= lg;
  }
  add_grad_tv(v, cfg.epsilon, cfg.alpha * cfg.beta, out.images[0]);
  add_grad_tv2_lie(w, cfg.epsilon, cfg.alpha * (1 - cfg.beta), out.images[1]);
  return out;
}

GradientBundle grad_tgv_lie(const ManifoldImage& u, const ManifoldImage& a1,
                            const ManifoldImage& a2, const ManifoldImage& f,
                            const ModelConfig& cfg) {
  const Manifold& m = u.manifold();
  require_lie_group(m);
  const PixelGrid& g = u.grid();
  const int rep = m.rep_dim();
  GradientBundle out;
  for (int k = 0; k < 3; ++k)
    out.images.emplace_back(MatrixXd::Zero(rep, u.size()));
  add_grad_data(u, f, out.images[0]);

  ManifoldImage dx = lie_forward_diff(u, Axis::X);
  ManifoldImage dy = lie_forward_diff(u, Axis::Y);
  VectorXd e(rep);
  m.group_identity(e);

  double first = 0, second = 0;
  for (int i = 0; i < u.size(); ++i) {
    first += sq(m.dist(dx.pixel(i), a1.pixel(i)));
    first += sq(m.dist(dy.pixel(i), a2.pixel(i)));
  }
  ManifoldImage b1x = lie_backward_diff(a1, Axis::X);
  ManifoldImage b1y = lie_backward_diff(a1, Axis::Y);
  ManifoldImage b2x = lie_backward_diff(a2, Axis::X);
  ManifoldImage b2y = lie_backward_diff(a2, Axis::Y);
  for (int i = 0; i < u.size(); ++i)
    second += sq(m.dist(b1x.pixel(i), e)) + sq(m.dist(b2y.pixel(i), e)) +
              sq(m.dist(b1y.pixel(i), e)) + sq(m.dist(b2x.pixel(i), e));

  const double w1 =
      cfg.alpha * cfg.beta / (2.0 * std::sqrt(first + sq(cfg.epsilon)));
  const double w2 = cfg.alpha * (1 - cfg.beta) /
                    (2.0 * std::sqrt(second + sq(cfg.epsilon)));

  VectorXd inv(rep), arg(rep), lg(rep);
  // first group: dist^2(u_{i+e} o u_i^-1, a_k)
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      for (Axis ax : {Axis::X, Axis::Y}) {
        const ManifoldImage& a = (ax == Axis::X) ? a1 : a2;
        MatrixXd& ga = (ax == Axis::X) ? out.images[1] : out.images[2];
        const ManifoldImage& diff = (ax == Axis::X) ? dx : dy;
        if (!has_forward(g, i1, i2, ax)) {
          // boundary term dist^2(e, a)
          m.log(a.pixel(i), e, lg);
          ga.col(i) -= 2.0 * w1 * lg;
          continue;
        }
        int j = ax == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
        m.log(a.pixel(i), diff.pixel(i), lg);
        ga.col(i) -= 2.0 * w1 * lg;
        // wrt u_j: dist(u_j o u_i^-1, a) = dist(u_j, a o u_i)
        m.compose(a.pixel(i), u.pixel(i), arg);
        m.log(u.pixel(j), arg, lg);
        out.images[0].col(j) -= 2.0 * w1 * lg;
        // wrt u_i: dist(u_j o u_i^-1, a) = dist(u_i, a^-1 o u_j)
        m.inverse(a.pixel(i), inv);
        m.compose(inv, u.pixel(j), arg);
        m.log(u.pixel(i), arg, lg);
        out.images[0].col(i) -= 2.0 * w1 * lg;
      }
    }

  // second group: dist^2(a_{k,i}, a_{k,i-e}) on interior windows
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      for (int k = 0; k < 2; ++k) {
        const ManifoldImage& a = (k == 0) ? a1 : a2;
        MatrixXd& ga = (k == 0) ? out.images[1] : out.images[2];
        for (Axis ax : {Axis::X, Axis::Y}) {
          if (!is_interior(g, i1, i2, ax)) continue;
          int i = g.index(i1, i2);
          int j = ax == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
          m.log(a.pixel(i), a.pixel(j), lg);
          ga.col(i) -= 2.0 * w2 * lg;
          m.log(a.pixel(j), a.pixel(i), lg);
          ga.col(j) -= 2.0 * w2 * lg;
        }
      }
    }
  return out;
}

GradientBundle grad_tgv_pole(const ManifoldImage& u, const TangentField& xi,
                             const ManifoldImage& f, const ModelConfig& cfg) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  const int rep = m.rep_dim();
  GradientBundle out;
  out.images.emplace_back(MatrixXd::Zero(rep, u.size()));
  out.xi = MatrixXd::Zero(2 * rep, u.size());
  add_grad_data(u, f, out.images[0]);

  // first term groups: parallel pair gradients, ordered scatter
  TangentField grad_u_field = intrinsic_gradient(u);
  MatrixXd slot_f1(2 * 3 * rep, g.size());
  VectorXd w1(g.size());
  parallel_ranges(g.size(), [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      double s = 0;
      for (int k = 0; k < 2; ++k) {
        VectorXd r = grad_u_field.component(i, k) - xi.component(i, k);
        s += m.inner(u.pixel(i), r, r);
      }
      w1[i] = cfg.alpha * cfg.beta / (2.0 * std::sqrt(s + sq(cfg.epsilon)));
      for (int k = 0; k < 2; ++k) {
        Axis ax = k == 0 ? Axis::X : Axis::Y;
        auto slot = slot_f1.col(i).segment(k * 3 * rep, 3 * rep);
        if (has_forward(g, i1, i2, ax)) {
          int j = ax == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
          TgvF1Grads f1 =
              grad_tgv_f1(m, u.pixel(i), u.pixel(j), xi.component(i, k));
          slot << f1.wrt_xi, f1.wrt_u, f1.wrt_u_next;
        } else {
          // group term reduces to |xi|^2
          slot.segment(0, rep) = 2.0 * xi.component(i, k);
          slot.segment(rep, 2 * rep).setZero();
        }
      }
    }
  });
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      for (int k = 0; k < 2; ++k) {
        Axis ax = k == 0 ? Axis::X : Axis::Y;
        auto slot = slot_f1.col(i).segment(k * 3 * rep, 3 * rep);
        out.xi->col(i).segment(k * rep, rep) += w1[i] * slot.segment(0, rep);
        if (has_forward(g, i1, i2, ax)) {
          int j = ax == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
          out.images[0].col(i) += w1[i] * slot.segment(rep, rep);
          out.images[0].col(j) += w1[i] * slot.segment(2 * rep, rep);
        }
      }
    }

  // second term groups
  TangentField bx = backward_diff_pole(xi, Axis::X);
  TangentField by = backward_diff_pole(xi, Axis::Y);
  MatrixXd slot_f2(2 * 2 * 4 * rep, g.size());
  VectorXd w2(g.size());
  parallel_ranges(g.size(), [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      double s = 0;
      for (int k = 0; k < 2; ++k) {
        s += m.inner(u.pixel(i), bx.component(i, k), bx.component(i, k));
        s += m.inner(u.pixel(i), by.component(i, k), by.component(i, k));
      }
      w2[i] = cfg.alpha * (1 - cfg.beta) /
              (2.0 * std::sqrt(s + sq(cfg.epsilon)));
      if (w2[i] == 0.0) continue;
      for (int a = 0; a < 2; ++a) {
        Axis ax = a == 0 ? Axis::X : Axis::Y;
        if (!is_interior(g, i1, i2, ax)) continue;
        int j = ax == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
        for (int k = 0; k < 2; ++k) {
          TgvF2Grads f2 = grad_tgv_f2(m, u.pixel(j), u.pixel(i),
                                      xi.component(j, k), xi.component(i, k));
          slot_f2.col(i).segment((a * 2 + k) * 4 * rep, 4 * rep)
              << f2.wrt_xi, f2.wrt_xi_prev, f2.wrt_u, f2.wrt_u_prev;
        }
      }
    }
  });
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      if (w2[i] == 0.0) continue;
      for (int a = 0; a < 2; ++a) {
        Axis ax = a == 0 ? Axis::X : Axis::Y;
        if (!is_interior(g, i1, i2, ax)) continue;
        int j = ax == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
        for (int k = 0; k < 2; ++k) {
          auto slot = slot_f2.col(i).segment((a * 2 + k) * 4 * rep, 4 * rep);
          out.xi->col(i).segment(k * rep, rep) += w2[i] * slot.segment(0, rep);
          out.xi->col(j).segment(k * rep, rep) +=
              w2[i] * slot.segment(rep, rep);
          out.images[0].col(i) += w2[i] * slot.segment(2 * rep, rep);
          out.images[0].col(j) += w2[i] * slot.segment(3 * rep, rep);
        }
      }
    }
  return out;
}

}  // namespace

TangentVector grad_dist_sq(const Manifold& m, const ManifoldPoint& x,
                           const ManifoldPoint& y) {
  VectorXd out(m.rep_dim());
  grad_dist_sq(m, x.coords, y.coords, out);
  return {x, std::move(out)};
}

void grad_dist_sq(const Manifold& m, CVec x, CVec y, Vec out) {
  m.log(x, y, out);
  out *= -2.0;
}

TgvF1Grads grad_tgv_f1(const Manifold& m, CVec u_i, CVec u_next, CVec xi_i) {
  const int rep = m.rep_dim();
  TgvF1Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  VectorXd lg(rep);
  m.log(u_i, u_next, lg);
  VectorXd t = 2.0 * (lg - xi_i);
  out.wrt_xi = -t;
  if (m.key().kind == ManifoldKind::Circle) {
    out.wrt_u = -t;  // flat chart: the log differentials are -1 and +1
    out.wrt_u_next = t;
    return out;
  }
  jac::log_base(m, u_i, u_next, t, out.wrt_u, true);
  jac::log_arg(m, u_i, u_next, t, out.wrt_u_next, true);
  return out;
}

TgvF2Grads grad_tgv_f2(const Manifold& m, CVec u_prev, CVec u_i, CVec xi_prev,
                       CVec xi_i) {
  const int rep = m.rep_dim();
  TgvF2Grads out{VectorXd(rep), VectorXd(rep), VectorXd(rep), VectorXd(rep)};
  if (m.key().kind == ManifoldKind::Circle) {
    // flat chart with identity transport: the dependence on the base
    // points cancels exactly
    out.wrt_xi = 2.0 * (xi_i - xi_prev);
    out.wrt_xi_prev = -out.wrt_xi;
    out.wrt_u.setZero();
    out.wrt_u_prev.setZero();
    return out;
  }
  PoleLadderEval ev = pole_ladder_eval(m, u_prev, u_i, xi_prev);
  VectorXd s = 2.0 * (xi_i - ev.zeta);
  out.wrt_xi = s;
  VectorXd minus_s = -s;
  PoleLadderAdjoints adj =
      pole_ladder_differentials(m, u_prev, u_i, xi_prev, ev, minus_s);
  out.wrt_xi_prev = adj.wrt_xi;
  out.wrt_u_prev = adj.wrt_x;
  out.wrt_u = adj.wrt_y;
  return out;
}

GradientBundle grad_energy(const State& state, const ManifoldImage& f,
                           const ModelConfig& cfg) {
  if (!(cfg.epsilon > 0))
    throw IoError("gradients need a positive smoothing epsilon");
  switch (cfg.model) {
    case Model::Tv:
    case Model::Additive:
      return grad_additive(state.images[0], f, cfg);
    case Model::IcMidpoint:
      return grad_ic_midpoint(state.images[0], state.images[1], f, cfg);
    case Model::TgvPole:
      return grad_tgv_pole(state.images[0], *state.xi, f, cfg);
    case Model::IcLie:
      return grad_ic_lie(state.images[0], state.images[1], f, cfg);
    case Model::TgvLie:
      return grad_tgv_lie(state.images[0], state.images[1], state.images[2],
                          f, cfg);
    default:
      throw IoError("extrinsic models are solved by ADMM, not by descent");
  }
}

double bundle_norm_sq(const State& state, const GradientBundle& g) {
  double total = 0;
  for (size_t img = 0; img < state.images.size(); ++img) {
    const ManifoldImage& u = state.images[img];
    const Manifold& m = u.manifold();
    for (int i = 0; i < u.size(); ++i)
      total += m.inner(u.pixel(i), g.images[img].col(i), g.images[img].col(i));
  }
  if (g.xi) {
    const ManifoldImage& u = state.images[0];
    const Manifold& m = u.manifold();
    const int rep = m.rep_dim();
    for (int i = 0; i < u.size(); ++i)
      for (int k = 0; k < 2; ++k)
        total += m.inner(u.pixel(i), g.xi->col(i).segment(k * rep, rep),
                         g.xi->col(i).segment(k * rep, rep));
  }
  return total;
}

}  // namespace mvd
