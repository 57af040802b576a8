#include <doctest.h>

#include "mvd/jacobi.hpp"
#include "mvd/manifolds.hpp"
#include "oracle.hpp"

using namespace mvd;
using mvd::testing::Rng;

namespace {

std::vector<std::shared_ptr<const Manifold>> curved_manifolds() {
  return {make_manifold("s2"), make_manifold("so3"), make_manifold("spd2")};
}

struct Setup {
  VectorXd x, y, xi;
};

Setup sample(const Manifold& m, Rng& rng, double scale = 0.6) {
  Setup s;
  s.x = testing::random_point(m, rng);
  s.y = testing::random_point_near(m, s.x, rng, scale);
  s.xi = testing::random_tangent(m, s.x, rng, 0.5);
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("jacobi");

TEST_CASE("frame structure on the sphere") {
  SphereManifold s2(2);
  Rng rng(101);
  VectorXd x = testing::random_point(s2, rng);
  VectorXd y = testing::random_point_near(s2, x, rng, 0.7);
  VectorXd dir(3);
  s2.log(x, y, dir);
  JacobiFrame f;
  s2.jacobi_frame(x, dir, f);
  double d = s2.dist(x, y);
  std::vector<double> k{f.kappa[0], f.kappa[1]};
  std::sort(k.begin(), k.end());
  CHECK(k[0] == doctest::Approx(0.0));
  CHECK(k[1] == doctest::Approx(d * d).epsilon(1e-10));
}

TEST_CASE("frame is metric-orthonormal") {
  Rng rng(103);
  for (const auto& m : curved_manifolds()) {
    CAPTURE(m->tag());
    for (int it = 0; it < 50; ++it) {
      Setup s = sample(*m, rng);
      VectorXd dir(m->rep_dim());
      m->log(s.x, s.y, dir);
      JacobiFrame f;
      m->jacobi_frame(s.x, dir, f);
      for (int a = 0; a < m->dim(); ++a)
        for (int b = 0; b < m->dim(); ++b) {
          double want = (a == b) ? 1.0 : 0.0;
          CHECK(std::abs(m->inner(s.x, f.basis.col(a), f.basis.col(b)) -
                         want) < 1e-10);
        }
    }
  }
}

TEST_CASE("spd curvature eigenvalues are nonpositive") {
  SpdManifold spd(3);
  Rng rng(107);
  for (int it = 0; it < 50; ++it) {
    VectorXd x = testing::random_point(spd, rng);
    VectorXd y = testing::random_point(spd, rng);
    VectorXd dir(6);
    spd.log(x, y, dir);
    JacobiFrame f;
    spd.jacobi_frame(x, dir, f);
    CHECK(f.kappa.maxCoeff() <= 1e-15);
  }
}

TEST_CASE("circle: every differential acts as plain transport") {
  CircleManifold s1;
  VectorXd x(1), y(1), in(1), out(1);
  x[0] = 0.4;
  y[0] = -0.9;
  in[0] = 0.7;
  jac::exp_base(s1, x, y, in, out, false);
  CHECK(out[0] == doctest::Approx(0.7));
  jac::log_base(s1, x, y, in, out, false);
  CHECK(out[0] == doctest::Approx(-0.7));
  jac::log_arg(s1, x, y, in, out, false);
  CHECK(out[0] == doctest::Approx(0.7));
  jac::geo_x(s1, x, y, 0.25, in, out, false);
  CHECK(out[0] == doctest::Approx(0.75 * 0.7));
  jac::geo_y(s1, x, y, 0.25, in, out, false);
  CHECK(out[0] == doctest::Approx(0.25 * 0.7));
}

TEST_CASE("geodesic differential in x vanishes at tau=1") {
  Rng rng(109);
  for (const auto& m : curved_manifolds()) {
    Setup s = sample(*m, rng);
    VectorXd out(m->rep_dim());
    jac::geo_x(*m, s.x, s.y, 1.0, s.xi, out, false);
    CHECK(out.norm() < 1e-12);
  }
}

TEST_CASE("differentials are linear") {
  Rng rng(113);
  for (const auto& m : curved_manifolds()) {
    CAPTURE(m->tag());
    Setup s = sample(*m, rng);
    VectorXd u = testing::random_tangent(*m, s.x, rng);
    VectorXd v = testing::random_tangent(*m, s.x, rng);
    double a = 1.7, b = -0.3;
    VectorXd lin = a * u + b * v;
    VectorXd out1(m->rep_dim()), out2(m->rep_dim()), out3(m->rep_dim());
    jac::geo_x(*m, s.x, s.y, 0.5, lin, out1, false);
    jac::geo_x(*m, s.x, s.y, 0.5, u, out2, false);
    jac::geo_x(*m, s.x, s.y, 0.5, v, out3, false);
    CHECK((out1 - a * out2 - b * out3).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("finite-difference agreement for all kinds") {
  Rng rng(127);
  auto manifolds = curved_manifolds();
  manifolds.push_back(make_manifold("s1"));
  manifolds.push_back(make_manifold("s4"));
  for (const auto& mp : manifolds) {
    const Manifold& m = *mp;
    CAPTURE(m.tag());
    for (int it = 0; it < 20; ++it) {
      Setup s = sample(m, rng, 0.5);
      VectorXd eta = testing::random_tangent(m, s.x, rng);
      VectorXd got(m.rep_dim());
      const int rep = m.rep_dim();

      // exp in the base point; the tangent rides along by transport
      jac::exp_base(m, s.x, s.xi, eta, got, false);
      auto f_expb = [&](CVec p) {
        VectorXd moved(rep), out(rep), lg(rep);
        m.log(s.x, p, lg);
        m.transport_along(s.x, lg, 1.0, s.xi, moved);
        m.exp(p, moved, out);
        return out;
      };
      VectorXd want = testing::fd_map(m, f_expb, s.x, eta);
      CHECK(testing::rel_err_vec(got, want) < 1e-5);

      // exp in the tangent: perturb xi linearly
      jac::exp_tangent(m, s.x, s.xi, eta, got, false);
      {
        double h = 1e-5;
        VectorXd pp(rep), pm(rep), base(rep), lp(rep), lm(rep);
        VectorXd vp = s.xi + h * eta, vm = s.xi - h * eta;
        m.exp(s.x, s.xi, base);
        m.exp(s.x, vp, pp);
        m.exp(s.x, vm, pm);
        m.log(base, pp, lp);
        m.log(base, pm, lm);
        want = (lp - lm) / (2 * h);
      }
      CHECK(testing::rel_err_vec(got, want) < 1e-5);

      // log in the base; outputs compared after transport to the center
      jac::log_base(m, s.x, s.y, eta, got, false);
      auto f_logb = [&](CVec p) {
        VectorXd lg(rep), out(rep), back(rep);
        m.log(p, s.y, lg);
        m.log(p, s.x, back);
        VectorXd res(rep);
        m.transport(p, s.x, lg, res);
        return res;
      };
      want = testing::fd_map_linear(m, f_logb, s.x, eta);
      CHECK(testing::rel_err_vec(got, want) < 1e-5);

      // log in the argument
      jac::log_arg(m, s.x, s.y, testing::random_tangent(m, s.y, rng), got,
                   false);
      VectorXd eta_y = testing::random_tangent(m, s.y, rng);
      jac::log_arg(m, s.x, s.y, eta_y, got, false);
      auto f_loga = [&](CVec q) {
        VectorXd lg(rep);
        m.log(s.x, q, lg);
        return lg;
      };
      want = testing::fd_map_linear(m, f_loga, s.y, eta_y);
      CHECK(testing::rel_err_vec(got, want) < 1e-5);

      // geodesic evaluation, both arguments, including the t=2 extension
      for (double tau : {0.3, 0.5, 2.0}) {
        jac::geo_x(m, s.x, s.y, tau, eta, got, false);
        auto f_gx = [&](CVec p) {
          VectorXd out(rep);
          m.geodesic(p, s.y, tau, out);
          return out;
        };
        want = testing::fd_map(m, f_gx, s.x, eta);
        CHECK(testing::rel_err_vec(got, want) < 1e-5);

        jac::geo_y(m, s.x, s.y, tau, eta_y, got, false);
        auto f_gy = [&](CVec q) {
          VectorXd out(rep);
          m.geodesic(s.x, q, tau, out);
          return out;
        };
        want = testing::fd_map(m, f_gy, s.y, eta_y);
        CHECK(testing::rel_err_vec(got, want) < 1e-5);
      }
    }
  }
}

TEST_CASE("adjoint identity") {
  Rng rng(131);
  auto manifolds = curved_manifolds();
  manifolds.push_back(make_manifold("s1"));
  for (const auto& mp : manifolds) {
    const Manifold& m = *mp;
    CAPTURE(m.tag());
    const int rep = m.rep_dim();
    double worst = 0;
    for (int it = 0; it < 1000; ++it) {
      Setup s = sample(m, rng, 0.5);
      VectorXd gx(rep);
      m.geodesic(s.x, s.y, 0.5, gx);
      VectorXd eta = testing::random_tangent(m, s.x, rng);
      VectorXd out(rep), back(rep);

      // geo_x at tau=1/2
      VectorXd w = testing::random_tangent(m, gx, rng);
      jac::geo_x(m, s.x, s.y, 0.5, eta, out, false);
      jac::geo_x(m, s.x, s.y, 0.5, w, back, true);
      worst = std::max(worst, std::abs(m.inner(gx, out, w) -
                                       m.inner(s.x, eta, back)));

      // log_arg
      VectorXd eta_y = testing::random_tangent(m, s.y, rng);
      VectorXd wx = testing::random_tangent(m, s.x, rng);
      jac::log_arg(m, s.x, s.y, eta_y, out, false);
      jac::log_arg(m, s.x, s.y, wx, back, true);
      worst = std::max(worst, std::abs(m.inner(s.x, out, wx) -
                                       m.inner(s.y, eta_y, back)));

      // exp_tangent
      VectorXd ey(rep);
      m.exp(s.x, s.xi, ey);
      VectorXd wy = testing::random_tangent(m, ey, rng);
      jac::exp_tangent(m, s.x, s.xi, eta, out, false);
      jac::exp_tangent(m, s.x, s.xi, wy, back, true);
      worst = std::max(worst, std::abs(m.inner(ey, out, wy) -
                                       m.inner(s.x, eta, back)));

      // exp_base
      jac::exp_base(m, s.x, s.xi, eta, out, false);
      jac::exp_base(m, s.x, s.xi, wy, back, true);
      worst = std::max(worst, std::abs(m.inner(ey, out, wy) -
                                       m.inner(s.x, eta, back)));

      // log_base (both sides live at x)
      jac::log_base(m, s.x, s.y, eta, out, false);
      jac::log_base(m, s.x, s.y, wx, back, true);
      worst = std::max(worst, std::abs(m.inner(s.x, out, wx) -
                                       m.inner(s.x, eta, back)));
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("kind-dispatched wrappers agree with the raw kernels") {
  auto s2 = make_manifold("s2");
  Rng rng(133);
  ManifoldPoint x = make_point(*s2, testing::random_point(*s2, rng));
  ManifoldPoint y =
      make_point(*s2, testing::random_point_near(*s2, x.coords, rng, 0.5));
  TangentVector eta =
      make_tangent(*s2, x, testing::random_tangent(*s2, x.coords, rng));

  TangentVector got = diff_map(*s2, DiffKind::GeodesicInX, x, y, 0.5, eta);
  VectorXd want(3);
  jac::geo_x(*s2, x.coords, y.coords, 0.5, eta.vec, want, false);
  CHECK((got.vec - want).norm() < 1e-14);
  // output base is the geodesic point
  VectorXd mid(3);
  s2->geodesic(x.coords, y.coords, 0.5, mid);
  CHECK((got.base.coords - mid).norm() < 1e-14);

  TangentVector xi =
      make_tangent(*s2, x, testing::random_tangent(*s2, x.coords, rng, 0.4));
  TangentVector ge = diff_map(*s2, DiffKind::ExpInTangent, x, xi, eta);
  jac::exp_tangent(*s2, x.coords, xi.vec, eta.vec, want, false);
  CHECK((ge.vec - want).norm() < 1e-14);

  // adjoint wrapper returns a tangent at the source argument
  VectorXd ey(3);
  s2->exp(x.coords, xi.vec, ey);
  ManifoldPoint yp = make_point(*s2, ey);
  TangentVector w =
      make_tangent(*s2, yp, testing::random_tangent(*s2, ey, rng));
  TangentVector adj = adjoint_diff_map(*s2, DiffKind::ExpInTangent, x, xi, w);
  jac::exp_tangent(*s2, x.coords, xi.vec, w.vec, want, true);
  CHECK((adj.vec - want).norm() < 1e-14);
  CHECK((adj.base.coords - x.coords).norm() == 0.0);

  // unknown-kind misuse of the overloads
  CHECK_THROWS_AS(diff_map(*s2, DiffKind::ExpInPoint, x, y, 0.0, eta),
                  GeometryError);
  CHECK_THROWS_AS(diff_map(*s2, DiffKind::LogInBase, x, xi, eta),
                  GeometryError);
}

TEST_CASE("adjoint of the zero map is zero") {
  SphereManifold s2(2);
  Rng rng(137);
  VectorXd x = testing::random_point(s2, rng);
  VectorXd y = testing::random_point_near(s2, x, rng, 0.5);
  VectorXd gx(3);
  s2.geodesic(x, y, 1.0, gx);
  VectorXd w = testing::random_tangent(s2, gx, rng);
  VectorXd out(3);
  jac::geo_x(s2, x, y, 1.0, w, out, true);
  CHECK(out.norm() < 1e-12);
}

TEST_SUITE_END();
