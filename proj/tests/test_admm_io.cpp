#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "mvd/admm.hpp"
#include "mvd/energies.hpp"
#include "mvd/euclidean.hpp"
#include "mvd/gradcheck.hpp"
#include "mvd/manifolds.hpp"
#include "mvd/metrics.hpp"
#include "mvd/mvimg.hpp"
#include "mvd/noise.hpp"
#include "mvd/synth.hpp"
#include "oracle.hpp"

using namespace mvd;
using mvd::testing::Rng;

TEST_SUITE_BEGIN("admm_io");

TEST_CASE("admm with zero prior weight returns the data") {
  ManifoldImage f = synth("s2_four_segments");
  ModelConfig cfg{Model::ExtAdditive, 1e-12, 0.5, 0.0};
  AdmmParams params;
  params.max_iter = 50;
  AdmmReport rep = admm_extrinsic(f, cfg, params);
  CHECK(mse(rep.z, f) < 1e-12);
  CHECK(rep.converged);
}

TEST_CASE("admm iterates stay on the manifold and improve the objective") {
  ManifoldImage clean = synth("s1_signal");
  ModelConfig cfg{Model::ExtIc, 0.03, 1.0 / 3.0, 0.0};
  AdmmParams params;
  params.max_iter = 120;
  params.tol_primal = 1e-9;
  params.tol_dual = 1e-9;
  AdmmReport rep = admm_extrinsic(clean, cfg, params);
  CHECK(rep.max_membership_error <= 1e-10);
  REQUIRE(rep.best_feasible_trace.size() >= 2);
  for (size_t k = 1; k < rep.best_feasible_trace.size(); ++k)
    CHECK(rep.best_feasible_trace[k] <= rep.best_feasible_trace[k - 1]);
  CHECK(rep.best_feasible_trace.back() < rep.best_feasible_trace.front());
}

TEST_CASE("extrinsic ic separates jumps into the piecewise constant part") {
  ManifoldImage f = synth("s1_signal");
  ModelConfig cfg{Model::ExtIc, 0.03, 1.0 / 3.0, 0.0};
  AdmmParams params;
  params.max_iter = 200;
  AdmmReport rep = admm_extrinsic(f, cfg, params);
  const MatrixXd& v = rep.blocks[0];
  // euclidean TV mass of v concentrates on a few gaps
  const PixelGrid& g = f.grid();
  std::vector<double> gaps;
  double total = 0;
  for (int i = 0; i + 1 < g.size(); ++i) {
    double d = (v.col(i + 1) - v.col(i)).norm();
    gaps.push_back(d);
    total += d;
  }
  std::sort(gaps.rbegin(), gaps.rend());
  double top5 = 0;
  for (int k = 0; k < 5 && k < int(gaps.size()); ++k) top5 += gaps[k];
  CHECK(top5 >= 0.95 * total);
}

TEST_CASE("flat-limit extrinsic ic energy matches the intrinsic one") {
  // wrap-free tiny data; the midpoint parametrization halves the
  // components, which maps the intrinsic parameters (alpha, beta) to
  // extrinsic ones (alpha(1+beta), 2beta/(1+beta))
  auto s1 = make_manifold("s1");
  ManifoldImage f = random_image(s1, 24, 1, 0.005, 801);
  double alpha = 0.002, beta = 0.4;
  ModelConfig icfg{Model::IcMidpoint, alpha, beta, 1e-9};

  ModelConfig ecfg{Model::ExtIc, alpha * (1 + beta), 2 * beta / (1 + beta),
                   0.0};
  AdmmParams aparams;
  aparams.max_iter = 600;
  aparams.inner_iter = 300;
  aparams.tol_primal = 1e-9;
  aparams.tol_dual = 1e-9;
  AdmmReport arep = admm_extrinsic(f, ecfg, aparams);
  double e_ext = arep.best_feasible_trace.back();

  // descent on the intrinsic model
  DescentParams dparams = default_params(f);
  dparams.max_iter = 60000;
  SolverReport irep =
      gradient_descent(initial_state(icfg.model, f), f, icfg, dparams);
  double e_int = energy(irep.final_state, f, icfg).total;

  // the half-scaled embedding of the intrinsic minimizer evaluates to the
  // same energy under the extrinsic functional (the cross-solver identity
  // on wrap-free data)
  const ManifoldImage& v = irep.final_state.images[0];
  const ManifoldImage& w = irep.final_state.images[1];
  MatrixXd ve(2, f.size()), we(2, f.size());
  VectorXd e2(2);
  for (int i = 0; i < f.size(); ++i) {
    s1->embed(v.pixel(i), e2);
    ve.col(i) = 0.5 * e2;
    s1->embed(w.pixel(i), e2);
    we.col(i) = 0.5 * e2;
  }
  double e_ext_at_mapped = euc::energy_ic(
      f.grid(), ve, we, embed_image(f), ecfg.alpha, ecfg.beta, 0.0);
  CHECK(std::abs(e_int - e_ext_at_mapped) < 1e-6);

  // the extrinsic solver minimizes over a strictly larger feasible set,
  // so its best value cannot sit above the mapped intrinsic candidate
  CHECK(e_ext <= e_ext_at_mapped + 1e-8);
}

TEST_CASE("mvimg round trip is bitwise lossless") {
  ManifoldImage u = synth("spd3_image");
  std::string path = "/tmp/mvd_test_roundtrip.mvimg";
  write_mvimg(path, u);
  ManifoldImage back = read_mvimg(path);
  CHECK(back.n1() == u.n1());
  CHECK(back.n2() == u.n2());
  CHECK((back.pts - u.pts).lpNorm<Eigen::Infinity>() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("mvimg rejects malformed files") {
  ManifoldImage u = synth("s1_signal");
  std::string path = "/tmp/mvd_test_bad.mvimg";
  write_mvimg(path, u);

  // truncate
  {
    std::ifstream in(path, std::ios::binary);
    std::string buf((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    std::ofstream out(path, std::ios::binary);
    out.write(buf.data(), std::streamsize(buf.size() - 9));
  }
  CHECK_THROWS_AS(read_mvimg(path), IoError);

  // bad magic
  {
    write_mvimg(path, u);
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    io.seekp(0);
    io.write("XXIMG1", 6);
  }
  CHECK_THROWS_AS(read_mvimg(path), IoError);

  // membership violation: non-unit s2 point
  {
    auto s2 = make_manifold("s2");
    ManifoldImage w(s2, 2, 1);
    w.pixel(0) << 0, 0, 1;
    w.pixel(1) << 0, 0, 1;
    write_mvimg(path, w);
    std::fstream io(path, std::ios::binary | std::ios::in | std::ios::out);
    // payload starts after 6 + 1 + 2 + 12 bytes
    io.seekp(21 + 16);
    double bad = 1.1;
    io.write(reinterpret_cast<const char*>(&bad), 8);
  }
  CHECK_THROWS_AS(read_mvimg(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("noise determinism and statistics") {
  ManifoldImage u = synth("s2_four_segments");
  NoiseSpec spec{NoiseKind::TangentGaussian, 0.1, 42};
  ManifoldImage a = add_noise(u, spec);
  ManifoldImage b = add_noise(u, spec);
  CHECK((a.pts - b.pts).lpNorm<Eigen::Infinity>() == 0.0);

  // per-pixel squared tangent norm averages d sigma^2
  auto s2 = make_manifold("s2");
  ManifoldImage big(s2, 100, 1);
  Rng rng(803);
  VectorXd p = testing::random_point(*s2, rng);
  for (int i = 0; i < big.size(); ++i) big.pixel(i) = p;
  double acc = 0;
  int samples = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    ManifoldImage noisy =
        add_noise(big, {NoiseKind::TangentGaussian, 0.1, 9000 + rep});
    for (int i = 0; i < big.size(); ++i) {
      double d = s2->dist(big.pixel(i), noisy.pixel(i));
      acc += d * d;
      ++samples;
    }
  }
  double mean = acc / samples;
  CHECK(std::abs(mean - 2 * 0.01) / (2 * 0.01) < 0.05);

  // sigma -> 0 limit returns the input
  ManifoldImage tiny = add_noise(u, {NoiseKind::TangentGaussian, 1e-15, 1});
  CHECK(mse(tiny, u) < 1e-20);

  // wrapped gaussian only on the circle
  CHECK_THROWS_AS(add_noise(u, {NoiseKind::WrappedGaussian, 0.1, 1}),
                  IoError);
}

TEST_CASE("mse basics") {
  ManifoldImage u = synth("s1_signal");
  CHECK(mse(u, u) == doctest::Approx(0.0));
  ManifoldImage v = u;
  v.pixel(3)[0] = wrap_angle(v.pixel(3)[0] + 0.2);
  CHECK(mse(u, v) == doctest::Approx(0.04 / u.size()));
  CHECK(mse(u, v) == doctest::Approx(mse(v, u)));
}

TEST_CASE("synthetic fixtures have the pinned shapes") {
  CHECK(synth("s1_signal").size() == 100);
  CHECK(synth("s2_jump").size() == 192);
  ManifoldImage four = synth("s2_four_segments");
  CHECK(four.size() == 80);
  // jump between segments 2 and 3
  auto s2 = make_manifold("s2");
  CHECK(s2->dist(four.pixel(39), four.pixel(40)) > 0.3);
  CHECK_THROWS_AS(synth("nonsense"), IoError);
}

TEST_SUITE_END();
