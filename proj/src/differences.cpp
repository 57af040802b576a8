#include "mvd/differences.hpp"

#include "mvd/parallel.hpp"
#include "mvd/transport.hpp"

namespace mvd {

[[noreturn]] void rethrow_at_pixel(const GeometryError& err, int i1, int i2) {
  throw CutLocusError("pixel (" + std::to_string(i1) + "," +
                      std::to_string(i2) + "): " + err.what());
}

void require_lie_group(const Manifold& m) {
  if (!m.lie_group())
    throw NotLieGroupError(m.tag() + ": Lie-group differences need S^1 or SO(3)");
}

TangentField forward_diff_intrinsic(const ManifoldImage& u, Axis axis) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  TangentField out(u, 1);
  parallel_ranges(g.size(), [&](int begin, int end) {
    VectorXd lg(m.rep_dim());
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      if (!has_forward(g, i1, i2, axis)) continue;
      int j = axis == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
      try {
        m.log(u.pixel(i), u.pixel(j), lg);
      } catch (const GeometryError& err) {
        rethrow_at_pixel(err, i1, i2);
      }
      out.component(i, 0) = lg;
    }
  });
  return out;
}

TangentField intrinsic_gradient(const ManifoldImage& u) {
  TangentField dx = forward_diff_intrinsic(u, Axis::X);
  TangentField dy = forward_diff_intrinsic(u, Axis::Y);
  TangentField out(u, 2);
  const int rep = u.manifold().rep_dim();
  out.vecs.topRows(rep) = dx.vecs;
  out.vecs.bottomRows(rep) = dy.vecs;
  return out;
}

TangentField backward_diff_pole(const TangentField& xi, Axis axis) {
  const ManifoldImage& u = xi.base();
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  TangentField out(u, xi.comps());
  const bool flat_chart = m.key().kind == ManifoldKind::Circle;
  parallel_ranges(g.size(), [&](int begin, int end) {
    VectorXd moved(m.rep_dim());
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      if (!is_interior(g, i1, i2, axis)) continue;
      int j = axis == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
      for (int k = 0; k < xi.comps(); ++k) {
        if (flat_chart) {
          out.component(i, k) = xi.component(i, k) - xi.component(j, k);
          continue;
        }
        try {
          pole_ladder(m, u.pixel(j), u.pixel(i), xi.component(j, k), moved);
        } catch (const GeometryError& err) {
          rethrow_at_pixel(err, i1, i2);
        }
        out.component(i, k) = xi.component(i, k) - moved;
      }
    }
  });
  return out;
}

double d2_midpoint(const Manifold& m, CVec x1, CVec x2, CVec x3) {
  VectorXd c(m.rep_dim());
  try {
    m.geodesic(x1, x3, 0.5, c);
  } catch (const CutLocusError&) {
    throw AmbiguousMidpointError(
        "antipodal outer points: the midpoint set is not a single point");
  }
  return m.dist(c, x2);
}

double d2_midpoint(const Manifold& m, const ManifoldPoint& x1,
                   const ManifoldPoint& x2, const ManifoldPoint& x3) {
  return d2_midpoint(m, x1.coords, x2.coords, x3.coords);
}

double d11_mixed(const Manifold& m, CVec x1, CVec x2, CVec x3, CVec x4) {
  VectorXd c(m.rep_dim()), ct(m.rep_dim());
  try {
    m.geodesic(x1, x3, 0.5, c);
    m.geodesic(x2, x4, 0.5, ct);
  } catch (const CutLocusError&) {
    throw AmbiguousMidpointError(
        "antipodal pair: the midpoint set is not a single point");
  }
  return m.dist(c, ct);
}

SecondDiffs second_diffs_image(const ManifoldImage& u) {
  const Manifold& m = u.manifold();
  const PixelGrid& g = u.grid();
  SecondDiffs out;
  out.dxx.setZero(g.size());
  out.dyy.setZero(g.size());
  out.dxy.setZero(g.size());
  out.dyx.setZero(g.size());
  parallel_ranges(g.size(), [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      int i1 = i % g.n1, i2 = i / g.n1;
      try {
        if (is_interior(g, i1, i2, Axis::X))
          out.dxx[i] = d2_midpoint(m, u.pixel(i1 + 1, i2), u.pixel(i1, i2),
                                   u.pixel(i1 - 1, i2));
        if (is_interior(g, i1, i2, Axis::Y))
          out.dyy[i] = d2_midpoint(m, u.pixel(i1, i2 + 1), u.pixel(i1, i2),
                                   u.pixel(i1, i2 - 1));
        // mixed plaquette terms pair the two diagonals so the flat limit
        // is half the euclidean D_xy / D_yx stencil
        if (has_mixed_window(g, i1, i2, Axis::X))
          out.dxy[i] = d11_mixed(m, u.pixel(i1, i2), u.pixel(i1 + 1, i2),
                                 u.pixel(i1 + 1, i2 - 1), u.pixel(i1, i2 - 1));
        if (has_mixed_window(g, i1, i2, Axis::Y))
          out.dyx[i] = d11_mixed(m, u.pixel(i1, i2), u.pixel(i1, i2 + 1),
                                 u.pixel(i1 - 1, i2 + 1), u.pixel(i1 - 1, i2));
      } catch (const GeometryError& err) {
        rethrow_at_pixel(err, i1, i2);
      }
    }
  });
  return out;
}

ManifoldImage lie_forward_diff(const ManifoldImage& u, Axis axis) {
  const Manifold& m = u.manifold();
  require_lie_group(m);
  const PixelGrid& g = u.grid();
  ManifoldImage out(u.manifold_ptr(), g.n1, g.n2);
  VectorXd inv(m.rep_dim()), d(m.rep_dim());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      if (!has_forward(g, i1, i2, axis)) {
        m.group_identity(out.pixel(i));
        continue;
      }
      int j = axis == Axis::X ? g.index(i1 + 1, i2) : g.index(i1, i2 + 1);
      m.inverse(u.pixel(i), inv);
      m.compose(u.pixel(j), inv, d);
      out.pixel(i) = d;
    }
  return out;
}

ManifoldImage lie_backward_diff(const ManifoldImage& u, Axis axis) {
  const Manifold& m = u.manifold();
  require_lie_group(m);
  const PixelGrid& g = u.grid();
  ManifoldImage out(u.manifold_ptr(), g.n1, g.n2);
  VectorXd inv(m.rep_dim()), d(m.rep_dim());
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      if (!is_interior(g, i1, i2, axis)) {
        m.group_identity(out.pixel(i));
        continue;
      }
      int j = axis == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
      m.inverse(u.pixel(j), inv);
      m.compose(u.pixel(i), inv, d);
      out.pixel(i) = d;
    }
  return out;
}

LieSecondDiffs lie_second_diffs(const ManifoldImage& u) {
  const Manifold& m = u.manifold();
  require_lie_group(m);
  const PixelGrid& g = u.grid();
  LieSecondDiffs out{ManifoldImage(u.manifold_ptr(), g.n1, g.n2),
                     ManifoldImage(u.manifold_ptr(), g.n1, g.n2),
                     ManifoldImage(u.manifold_ptr(), g.n1, g.n2),
                     ManifoldImage(u.manifold_ptr(), g.n1, g.n2)};
  const int rep = m.rep_dim();
  VectorXd inv(rep), t1(rep), t2(rep), t3(rep);

  // u_{i+a} o u_i^{-1} o u_{i-a} o u_i^{-1}
  auto second = [&](int i, int ip, int im, Vec res) {
    m.inverse(u.pixel(i), inv);
    m.compose(u.pixel(ip), inv, t1);
    m.compose(t1, u.pixel(im), t2);
    m.compose(t2, inv, t3);
    res = t3;
  };
  // u_{i+(1,0)} o u_i^{-1} o u_{i-(0,1)} o u_{i+(1,-1)}^{-1} and mirror
  auto mixed = [&](int i, int a, int b, int c, Vec res) {
    m.inverse(u.pixel(i), inv);
    m.compose(u.pixel(a), inv, t1);
    m.compose(t1, u.pixel(b), t2);
    m.inverse(u.pixel(c), inv);
    m.compose(t2, inv, t3);
    res = t3;
  };

  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      m.group_identity(out.dxx.pixel(i));
      m.group_identity(out.dyy.pixel(i));
      m.group_identity(out.dxy.pixel(i));
      m.group_identity(out.dyx.pixel(i));
      if (is_interior(g, i1, i2, Axis::X))
        second(i, g.index(i1 + 1, i2), g.index(i1 - 1, i2), out.dxx.pixel(i));
      if (is_interior(g, i1, i2, Axis::Y))
        second(i, g.index(i1, i2 + 1), g.index(i1, i2 - 1), out.dyy.pixel(i));
      if (has_mixed_window(g, i1, i2, Axis::X))
        mixed(i, g.index(i1 + 1, i2), g.index(i1, i2 - 1),
              g.index(i1 + 1, i2 - 1), out.dxy.pixel(i));
      if (has_mixed_window(g, i1, i2, Axis::Y))
        mixed(i, g.index(i1, i2 + 1), g.index(i1 - 1, i2),
              g.index(i1 - 1, i2 + 1), out.dyx.pixel(i));
    }
  return out;
}

}  // namespace mvd
