#include "mvd/synth.hpp"

#include <cmath>

#include "mvd/energies.hpp"
#include "mvd/manifolds.hpp"

namespace mvd {

namespace {

// Piecewise-geodesic S^1 signal of length 100: a rising line, two
// constant plateaus split by a small jump, and a falling line that runs
// through -pi so the representation wraps around index 80.  The
// breakpoints are this fixture's own choice.
ManifoldImage make_s1_signal() {
  auto m = make_manifold("s1");
  ManifoldImage u(m, 100, 1);
  for (int i = 0; i < 100; ++i) {
    double a;
    if (i < 40) {
      a = -2.8 + (2.0 / 39.0) * i;
    } else if (i < 55) {
      a = -0.8;
    } else if (i < 70) {
      a = -0.4;
    } else {
      a = -0.4 - 0.25 * (i - 69);
    }
    u.pixel(i)[0] = wrap_angle(a);
  }
  return u;
}

// Piecewise structure for denoising tests: an affine ramp background, an
// ellipse with a linear interior, a constant box whose value sits across
// the +-pi seam from the ramp, and a paraboloid patch in the lower right.
ManifoldImage make_s1_image() {
  auto m = make_manifold("s1");
  const int n = 64;
  ManifoldImage u(m, n, n);
  const double s = n / 48.0;
  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      double a = -2.9 + (0.02 * i1 + 0.015 * i2) / s;
      double ex = (i1 - 16 * s) / (10 * s), ey = (i2 - 20 * s) / (13 * s);
      if (ex * ex + ey * ey <= 1.0) a = 0.5 + 0.12 * (i2 - 20 * s) / s;
      if (i1 >= 30 * s && i1 <= 43 * s && i2 >= 4 * s && i2 <= 15 * s)
        a = 2.9;
      if (i1 >= 28 * s && i2 >= 28 * s) {
        double r2 =
            (std::pow(i1 - 38 * s, 2) + std::pow(i2 - 38 * s, 2)) /
            (200 * s * s);
        a = -0.8 + 1.8 * r2;
      }
      u.pixel(i1, i2)[0] = wrap_angle(a);
    }
  return u;
}

VectorXd sphere_point(double polar, double azimuth) {
  VectorXd p(3);
  p << std::sin(polar) * std::cos(azimuth),
      std::sin(polar) * std::sin(azimuth), std::cos(polar);
  return p;
}

// Three geodesic segments with jumps between them: a meridian arc near
// the north pole, an equator arc, and a descent toward the south pole;
// the segments cover 1/5, 3/20 and 1/5 of a quarter arc.
ManifoldImage make_s2_jump() {
  auto m = make_manifold("s2");
  const int seg = 64;
  ManifoldImage u(m, 3 * seg, 1);
  const double quarter = M_PI / 2;
  for (int i = 0; i < seg; ++i) {
    double t = double(i) / (seg - 1);
    u.pixel(i) = sphere_point(quarter * 0.2 * t, 0.0);
    u.pixel(seg + i) = sphere_point(quarter, 0.5 + quarter * 0.15 * t);
    u.pixel(2 * seg + i) = sphere_point(quarter + quarter * 0.2 * t, 1.2);
  }
  return u;
}

// Four segments of length 20: two geodesic pieces, a jump to a constant
// plateau, then a final geodesic piece.
ManifoldImage make_s2_four_segments() {
  auto m = make_manifold("s2");
  const int seg = 20;
  ManifoldImage u(m, 4 * seg, 1);
  VectorXd p0 = sphere_point(0.7, 0.3);
  MatrixXd basis;
  m->tangent_basis(p0, basis);
  VectorXd d1 = 0.025 * basis.col(0);
  for (int i = 0; i < seg; ++i) {
    VectorXd t = double(i) * d1;
    m->exp(p0, t, u.pixel(i));
  }
  VectorXd p1 = u.pixel(seg - 1);
  m->tangent_basis(p1, basis);
  VectorXd d2 = 0.02 * (0.4 * basis.col(0) + 0.9 * basis.col(1));
  for (int i = 0; i < seg; ++i) {
    VectorXd t = double(i + 1) * d2;
    m->exp(p1, t, u.pixel(seg + i));
  }
  VectorXd p2 = u.pixel(2 * seg - 1);
  // jump of arc 0.45 before the constant plateau
  m->tangent_basis(p2, basis);
  VectorXd jump = 0.45 * basis.col(1);
  VectorXd p3(3);
  m->exp(p2, jump, p3);
  for (int i = 0; i < seg; ++i) u.pixel(2 * seg + i) = p3;
  m->tangent_basis(p3, basis);
  VectorXd d4 = 0.022 * (0.8 * basis.col(0) - 0.5 * basis.col(1));
  for (int i = 0; i < seg; ++i) {
    VectorXd t = double(i + 1) * d4;
    m->exp(p3, t, u.pixel(3 * seg + i));
  }
  return u;
}

// SPD(2) signal: the pixelwise geodesic midpoint of a four-plateau
// piecewise-constant signal and a two-piece geodesic signal.
ManifoldImage make_spd2_signal() {
  auto mp = make_manifold("spd2");
  const auto& m = dynamic_cast<const SpdManifold&>(*mp);
  const int n = 60;
  ManifoldImage v(mp, n, 1), w(mp, n, 1);

  auto tensor = [&](double a, double b, double theta) {
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    Eigen::Vector2d lam(a, b);
    return m.pack(r * lam.asDiagonal() * r.transpose());
  };

  VectorXd plateaus[4] = {tensor(1.0, 0.5, 0.0), tensor(2.2, 0.4, 0.5),
                          tensor(0.8, 0.8, 0.0), tensor(1.6, 0.3, -0.7)};
  for (int i = 0; i < n; ++i) v.pixel(i) = plateaus[(i * 4) / n];

  VectorXd w0 = tensor(0.6, 0.4, 0.2), w1 = tensor(1.8, 0.9, 1.0),
           w2 = tensor(0.9, 0.5, -0.4);
  for (int i = 0; i < n / 2; ++i) {
    double t = double(i) / (n / 2 - 1);
    m.geodesic(w0, w1, t, w.pixel(i));
  }
  for (int i = n / 2; i < n; ++i) {
    double t = double(i - n / 2) / (n / 2 - 1);
    m.geodesic(w1, w2, t, w.pixel(i));
  }
  return midpoint_image(v, w);
}

// SPD(3) image: a smooth anisotropic field with a tilted box of rotated
// tensors in the middle.
ManifoldImage make_spd3_image() {
  auto mp = make_manifold("spd3");
  const auto& m = dynamic_cast<const SpdManifold&>(*mp);
  const int n = 16;
  ManifoldImage u(mp, n, n);
  MatrixXd eye = MatrixXd::Identity(3, 3);
  VectorXd base = m.pack(eye);

  MatrixXd s1(3, 3), s2(3, 3), s3(3, 3);
  s1 << 1, 0.3, 0, 0.3, -0.5, 0.1, 0, 0.1, -0.5;
  s2 << -0.4, 0, 0.2, 0, 0.8, 0.1, 0.2, 0.1, -0.3;
  s3 << 0.2, 0.5, 0.3, 0.5, 0.2, 0.1, 0.3, 0.1, -0.6;

  for (int i2 = 0; i2 < n; ++i2)
    for (int i1 = 0; i1 < n; ++i1) {
      double tx = double(i1) / (n - 1), ty = double(i2) / (n - 1);
      MatrixXd tan = 0.8 * tx * s1 + 0.8 * ty * s2;
      if (i1 >= 5 && i1 <= 10 && i2 >= 5 && i2 <= 10) tan += 0.9 * s3;
      m.exp(base, m.pack(tan), u.pixel(i1, i2));
    }
  return u;
}

}  // namespace

std::vector<std::string> synth_names() {
  return {"s1_signal",    "s1_image",    "s2_jump",
          "s2_four_segments", "spd2_signal", "spd3_image"};
}

ManifoldImage synth(const std::string& name) {
  if (name == "s1_signal") return make_s1_signal();
  if (name == "s1_image") return make_s1_image();
  if (name == "s2_jump") return make_s2_jump();
  if (name == "s2_four_segments") return make_s2_four_segments();
  if (name == "spd2_signal") return make_spd2_signal();
  if (name == "spd3_image") return make_spd3_image();
  throw IoError("unknown synthetic fixture: " + name);
}

}  // namespace mvd
