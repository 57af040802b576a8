#include <doctest.h>

#include "mvd/differences.hpp"
#include "mvd/gradcheck.hpp"
#include "mvd/manifolds.hpp"
#include "oracle.hpp"

using namespace mvd;
using mvd::testing::Rng;

namespace {

ManifoldImage s1_signal(std::initializer_list<double> angles) {
  auto m = make_manifold("s1");
  ManifoldImage u(m, static_cast<int>(angles.size()), 1);
  int i = 0;
  for (double a : angles) u.pixel(i++)[0] = a;
  return u;
}

}  // namespace

TEST_SUITE_BEGIN("differences");

TEST_CASE("forward differences of a constant image vanish") {
  auto s2 = make_manifold("s2");
  ManifoldImage u(s2, 4, 3);
  Rng rng(301);
  VectorXd p = testing::random_point(*s2, rng);
  for (int i = 0; i < u.size(); ++i) u.pixel(i) = p;
  TangentField d = forward_diff_intrinsic(u, Axis::X);
  CHECK(d.vecs.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("circle forward differences") {
  ManifoldImage u = s1_signal({0.0, 0.1, 0.2});
  TangentField d = forward_diff_intrinsic(u, Axis::X);
  CHECK(d.component(0, 0)[0] == doctest::Approx(0.1));
  CHECK(d.component(1, 0)[0] == doctest::Approx(0.1));
  CHECK(d.component(2, 0)[0] == doctest::Approx(0.0));

  ManifoldImage w = s1_signal({M_PI - 0.05, -M_PI + 0.05});
  TangentField dw = forward_diff_intrinsic(w, Axis::X);
  CHECK(dw.component(0, 0)[0] == doctest::Approx(0.1));
}

TEST_CASE("pole backward difference of a parallel field vanishes") {
  auto s2 = make_manifold("s2");
  Rng rng(303);
  // geodesic row with its own velocity field (parallel by construction)
  int n = 6;
  ManifoldImage u(s2, n, 1);
  VectorXd x = testing::random_point(*s2, rng);
  VectorXd dir = testing::random_tangent(*s2, x, rng, 0.2);
  for (int i = 0; i < n; ++i) {
    VectorXd t = double(i) * dir;
    s2->exp(x, t, u.pixel(i));
  }
  TangentField xi(u, 1);
  for (int i = 0; i < n; ++i) {
    VectorXd t = double(i) * dir;
    s2->transport_along(x, dir, double(i), dir, xi.component(i, 0));
  }
  TangentField d = backward_diff_pole(xi, Axis::X);
  CHECK(d.vecs.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("flat circle backward difference is the scalar difference") {
  ManifoldImage u = s1_signal({0.0, 0.05, 0.15, 0.2});
  TangentField xi(u, 1);
  xi.component(0, 0)[0] = 0.3;
  xi.component(1, 0)[0] = 0.1;
  xi.component(2, 0)[0] = -0.2;
  xi.component(3, 0)[0] = 0.5;
  TangentField d = backward_diff_pole(xi, Axis::X);
  CHECK(d.component(0, 0)[0] == doctest::Approx(0.0));  // boundary
  CHECK(d.component(1, 0)[0] == doctest::Approx(0.1 - 0.3));
  CHECK(d.component(2, 0)[0] == doctest::Approx(-0.2 - 0.1));
  CHECK(d.component(3, 0)[0] == doctest::Approx(0.0));  // boundary
}

TEST_CASE("pole backward difference equals closed-form-transport difference") {
  auto s2 = make_manifold("s2");
  ManifoldImage u = random_image(s2, 5, 4, 0.3, 305);
  TangentField xi(u, 2);
  Rng rng(306);
  for (int i = 0; i < u.size(); ++i)
    for (int k = 0; k < 2; ++k)
      xi.component(i, k) = testing::random_tangent(*s2, u.pixel(i), rng, 0.4);
  for (Axis ax : {Axis::X, Axis::Y}) {
    TangentField got = backward_diff_pole(xi, ax);
    const PixelGrid& g = u.grid();
    for (int i2 = 0; i2 < g.n2; ++i2)
      for (int i1 = 0; i1 < g.n1; ++i1) {
        int i = g.index(i1, i2);
        if (!is_interior(g, i1, i2, ax)) {
          CHECK(got.component(i, 0).norm() == doctest::Approx(0.0));
          continue;
        }
        int j = ax == Axis::X ? g.index(i1 - 1, i2) : g.index(i1, i2 - 1);
        for (int k = 0; k < 2; ++k) {
          VectorXd moved(3);
          s2->transport(u.pixel(j), u.pixel(i), xi.component(j, k), moved);
          VectorXd want = xi.component(i, k) - moved;
          CHECK((got.component(i, k) - want).lpNorm<Eigen::Infinity>() <
                1e-10);
        }
      }
  }
}

TEST_CASE("d2 on geodesic triples and in the flat limit") {
  auto s2 = make_manifold("s2");
  Rng rng(307);
  for (int it = 0; it < 200; ++it) {
    VectorXd a = testing::random_point(*s2, rng);
    VectorXd c = testing::random_point_near(*s2, a, rng, 0.6);
    VectorXd mid(3);
    s2->geodesic(a, c, 0.5, mid);
    CHECK(d2_midpoint(*s2, a, mid, c) < 1e-10);
  }
  auto s1 = make_manifold("s1");
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int it = 0; it < 200; ++it) {
    VectorXd a(1), b(1), c(1);
    a[0] = u(rng);
    b[0] = u(rng);
    c[0] = u(rng);
    double want = 0.5 * std::abs(a[0] - 2 * b[0] + c[0]);
    CHECK(d2_midpoint(*s1, a, b, c) == doctest::Approx(want).epsilon(1e-8));
  }
}

TEST_CASE("d2 symmetry in the outer points") {
  auto s2 = make_manifold("s2");
  Rng rng(309);
  for (int it = 0; it < 200; ++it) {
    VectorXd a = testing::random_point(*s2, rng);
    VectorXd b = testing::random_point_near(*s2, a, rng, 0.4);
    VectorXd c = testing::random_point_near(*s2, a, rng, 0.4);
    CHECK(d2_midpoint(*s2, a, b, c) ==
          doctest::Approx(d2_midpoint(*s2, c, b, a)).epsilon(1e-10));
  }
}

TEST_CASE("d2 rejects antipodal outer points") {
  auto s2 = make_manifold("s2");
  VectorXd a(3), b(3), c(3);
  a << 0, 0, 1;
  b << 1, 0, 0;
  c << 0, 0, -1;
  CHECK_THROWS_AS(d2_midpoint(*s2, a, b, c), AmbiguousMidpointError);
}

TEST_CASE("d11 cases") {
  auto s2 = make_manifold("s2");
  Rng rng(311);
  VectorXd a = testing::random_point(*s2, rng);
  VectorXd b = testing::random_point_near(*s2, a, rng, 0.4);
  CHECK(d11_mixed(*s2, a, a, b, b) < 1e-12);
  VectorXd c = testing::random_point_near(*s2, a, rng, 0.4);
  VectorXd d = testing::random_point_near(*s2, a, rng, 0.4);
  CHECK(d11_mixed(*s2, a, b, c, d) ==
        doctest::Approx(d11_mixed(*s2, b, a, d, c)).epsilon(1e-12));
}

TEST_CASE("second differences of a geodesic image vanish in x") {
  auto spd = make_manifold("spd2");
  int n1 = 6, n2 = 3;
  ManifoldImage u(spd, n1, n2);
  Rng rng(313);
  VectorXd base = testing::random_point(*spd, rng);
  for (int i2 = 0; i2 < n2; ++i2) {
    VectorXd start = testing::random_point_near(*spd, base, rng, 0.3);
    VectorXd dir = testing::random_tangent(*spd, start, rng, 0.2);
    for (int i1 = 0; i1 < n1; ++i1) {
      VectorXd t = double(i1) * dir;
      spd->exp(start, t, u.pixel(i1, i2));
    }
  }
  SecondDiffs d = second_diffs_image(u);
  CHECK(d.dxx.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("1xN signals have no y or mixed terms") {
  auto s2 = make_manifold("s2");
  ManifoldImage u = random_image(s2, 7, 1, 0.4, 315);
  SecondDiffs d = second_diffs_image(u);
  CHECK(d.dyy.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  CHECK(d.dxy.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
  CHECK(d.dyx.lpNorm<Eigen::Infinity>() == doctest::Approx(0.0));
}

TEST_CASE("flat-limit second differences match half the euclidean stencil") {
  auto s1 = make_manifold("s1");
  ManifoldImage u = random_image(s1, 5, 4, 0.03, 317);
  SecondDiffs d = second_diffs_image(u);
  const PixelGrid& g = u.grid();
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 < g.n1; ++i1) {
      int i = g.index(i1, i2);
      if (is_interior(g, i1, i2, Axis::X)) {
        double st = u.pixel(i1 + 1, i2)[0] - 2 * u.pixel(i1, i2)[0] +
                    u.pixel(i1 - 1, i2)[0];
        CHECK(d.dxx[i] == doctest::Approx(0.5 * std::abs(st)).epsilon(1e-8));
      }
      if (has_mixed_window(g, i1, i2, Axis::X)) {
        double st = u.pixel(i1 + 1, i2)[0] - u.pixel(i1, i2)[0] -
                    u.pixel(i1 + 1, i2 - 1)[0] + u.pixel(i1, i2 - 1)[0];
        CHECK(d.dxy[i] == doctest::Approx(0.5 * std::abs(st)).epsilon(1e-8));
      }
    }
}

TEST_CASE("lie differences") {
  auto so3 = make_manifold("so3");
  ManifoldImage u = random_image(so3, 4, 4, 0.3, 319);

  // constant image: identity everywhere
  ManifoldImage c(so3, 3, 3);
  VectorXd e(4);
  so3->group_identity(e);
  Rng rng(320);
  VectorXd p = testing::random_point(*so3, rng);
  for (int i = 0; i < c.size(); ++i) c.pixel(i) = p;
  ManifoldImage dc = lie_forward_diff(c, Axis::X);
  for (int i = 0; i < c.size(); ++i)
    CHECK(so3->dist(dc.pixel(i), e) < 1e-12);

  // group-law round trip: (D u)_i o u_i = u_{i+1}
  ManifoldImage d = lie_forward_diff(u, Axis::X);
  const PixelGrid& g = u.grid();
  VectorXd back(4);
  for (int i2 = 0; i2 < g.n2; ++i2)
    for (int i1 = 0; i1 + 1 < g.n1; ++i1) {
      so3->compose(d.pixel(i1, i2), u.pixel(i1, i2), back);
      CHECK(so3->dist(back, u.pixel(i1 + 1, i2)) < 1e-10);
    }
}

TEST_CASE("lie differences on the circle are wrapped differences") {
  ManifoldImage u = s1_signal({0.2, 0.5, -0.1});
  ManifoldImage d = lie_forward_diff(u, Axis::X);
  CHECK(d.pixel(0)[0] == doctest::Approx(0.3));
  CHECK(d.pixel(1)[0] == doctest::Approx(-0.6));
  CHECK(d.pixel(2)[0] == doctest::Approx(0.0));
}

TEST_CASE("lie second differences") {
  auto s1 = make_manifold("s1");
  // arithmetic progression: second differences are the identity
  ManifoldImage u = s1_signal({0.1, 0.3, 0.5, 0.7});
  LieSecondDiffs d = lie_second_diffs(u);
  for (int i = 0; i < u.size(); ++i)
    CHECK(std::abs(d.dxx.pixel(i)[0]) < 1e-12);

  // right translation invariance of the magnitudes on SO(3)
  auto so3 = make_manifold("so3");
  ManifoldImage w = random_image(so3, 5, 1, 0.4, 321);
  Rng rng(322);
  VectorXd gR = testing::random_point(*so3, rng);
  ManifoldImage wg(so3, 5, 1);
  for (int i = 0; i < w.size(); ++i) so3->compose(w.pixel(i), gR, wg.pixel(i));
  LieSecondDiffs a = lie_second_diffs(w);
  LieSecondDiffs b = lie_second_diffs(wg);
  VectorXd e(4);
  so3->group_identity(e);
  for (int i = 0; i < w.size(); ++i)
    CHECK(so3->dist(a.dxx.pixel(i), e) ==
          doctest::Approx(so3->dist(b.dxx.pixel(i), e)).epsilon(1e-10));
}

TEST_CASE("lie differences reject non-group manifolds") {
  auto s2 = make_manifold("s2");
  ManifoldImage u = random_image(s2, 3, 3, 0.2, 323);
  CHECK_THROWS_AS(lie_forward_diff(u, Axis::X), NotLieGroupError);
}

TEST_CASE("global isometry leaves difference magnitudes unchanged") {
  auto s2 = make_manifold("s2");
  ManifoldImage u = random_image(s2, 4, 4, 0.4, 325);
  // a fixed rotation of R^3
  Eigen::Matrix3d R =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, -1).normalized())
          .toRotationMatrix();
  ManifoldImage v(s2, 4, 4);
  for (int i = 0; i < u.size(); ++i) v.pixel(i) = R * u.pixel(i);
  SecondDiffs du = second_diffs_image(u);
  SecondDiffs dv = second_diffs_image(v);
  CHECK((du.dxx - dv.dxx).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((du.dxy - dv.dxy).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_SUITE_END();
