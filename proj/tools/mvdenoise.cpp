// Command-line front end: denoising/decomposition runs, synthetic data,
// noise, metrics and the finite-difference gradient suites.  Machine
// readable progress goes to stdout as JSON lines.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "mvd/admm.hpp"
#include "mvd/descent.hpp"
#include "mvd/gradcheck.hpp"
#include "mvd/metrics.hpp"
#include "mvd/mvimg.hpp"
#include "mvd/noise.hpp"
#include "mvd/parallel.hpp"
#include "mvd/synth.hpp"

using json = nlohmann::json;
using namespace mvd;

namespace {

struct SolveOptions {
  std::string input, output, ground_truth, manifold_tag, model_name = "tv";
  double alpha = 1.0, beta = 1.0, epsilon = 1e-3;
  double sigma = 1.0, rho = 0.5, c = 1e-4;
  double delta = -1.0;
  long max_iter = -1;
  long seed_report = -1;
  int threads = 1;
  int log_every = 1;
  // extrinsic solver knobs
  double penalty = 1.0, tol_primal = 1e-6, tol_dual = 1e-6;
  long admm_max_iter = 500;
  int inner_iter = 200;
  bool allow_spd_extrinsic = false;
};

void add_solve_flags(CLI::App* cmd, SolveOptions& opt) {
  cmd->add_option("--input", opt.input, "input .mvimg file")->required();
  cmd->add_option("--output", opt.output, "restored .mvimg file")->required();
  cmd->add_option("--manifold", opt.manifold_tag,
                  "expected manifold tag (checked against the input file)");
  cmd->add_option("--model", opt.model_name,
                  "tv|additive|ic_midpoint|tgv_pole|ic_lie|tgv_lie|"
                  "ext_ic|ext_tgv|ext_additive");
  cmd->add_option("--alpha", opt.alpha, "prior weight");
  cmd->add_option("--beta", opt.beta, "first/second order balance in (0,1]");
  cmd->add_option("--epsilon", opt.epsilon, "smoothing parameter");
  cmd->add_option("--sigma", opt.sigma, "initial step size");
  cmd->add_option("--rho", opt.rho, "backtracking factor");
  cmd->add_option("--c", opt.c, "Armijo constant");
  cmd->add_option("--delta", opt.delta,
                  "stopping threshold on the maximal change");
  cmd->add_option("--max-iter", opt.max_iter, "iteration cap");
  cmd->add_option("--seed-report", opt.seed_report,
                  "opaque seed echoed into the run summary");
  cmd->add_option("--threads", opt.threads, "worker threads");
  cmd->add_option("--log-every", opt.log_every, "progress line stride");
  cmd->add_option("--ground-truth", opt.ground_truth,
                  "clean image for the reported MSE");
  cmd->add_option("--penalty", opt.penalty, "ADMM penalty");
  cmd->add_option("--admm-max-iter", opt.admm_max_iter, "ADMM outer cap");
  cmd->add_option("--tol-primal", opt.tol_primal, "ADMM primal tolerance");
  cmd->add_option("--tol-dual", opt.tol_dual, "ADMM dual tolerance");
  cmd->add_option("--inner-iter", opt.inner_iter,
                  "primal-dual budget of the ADMM convex block");
  cmd->add_flag("--allow-spd-extrinsic", opt.allow_spd_extrinsic,
                "enable the clip-and-shift SPD projection (off by default)");
}

void emit(const json& j) { std::cout << j.dump() << "\n"; }

int run_solve(const SolveOptions& opt, bool decompose) {
  ManifoldImage f = read_mvimg(opt.input);
  if (!opt.manifold_tag.empty() && f.manifold().tag() != opt.manifold_tag)
    throw IoError("input file holds " + f.manifold().tag() + ", expected " +
                  opt.manifold_tag);
  set_solver_threads(opt.threads);
  Model model = model_from_name(opt.model_name);
  ModelConfig cfg{model, opt.alpha, opt.beta, opt.epsilon};
  validate(cfg);

  std::optional<ManifoldImage> truth;
  if (!opt.ground_truth.empty()) truth = read_mvimg(opt.ground_truth);

  auto base = [&](const std::string& suffix) {
    std::string out = opt.output;
    auto dot = out.rfind(".mvimg");
    if (dot == std::string::npos) return out + suffix;
    return out.substr(0, dot) + suffix + ".mvimg";
  };

  if (model_is_extrinsic(model)) {
    AdmmParams params;
    params.penalty = opt.penalty;
    params.max_iter = opt.admm_max_iter;
    params.tol_primal = opt.tol_primal;
    params.tol_dual = opt.tol_dual;
    params.inner_iter = opt.inner_iter;
    params.allow_spd = opt.allow_spd_extrinsic;
    AdmmReport rep = admm_extrinsic(
        f, cfg, params,
        [&](long it, double best, double r, double s) {
          if (it % opt.log_every == 0)
            emit({{"iter", it},
                  {"energy", best},
                  {"primal_residual", r},
                  {"dual_residual", s}});
        });
    write_mvimg(opt.output, rep.z);
    if (decompose && rep.blocks.size() >= 2) {
      // embedded components as CSV (they live in the embedding space)
      for (size_t b = 0; b < rep.blocks.size(); ++b) {
        std::string path = base(b == 0 ? "_v" : "_w");
        path = path.substr(0, path.rfind(".mvimg")) + ".csv";
        std::ofstream os(path);
        os << "index";
        for (int r = 0; r < rep.blocks[b].rows(); ++r) os << ",c" << r;
        os << "\n";
        for (int i = 0; i < rep.blocks[b].cols(); ++i) {
          os << i;
          for (int r = 0; r < rep.blocks[b].rows(); ++r)
            os << "," << rep.blocks[b](r, i);
          os << "\n";
        }
      }
    }
    json summary{{"final_energy", rep.best_feasible_trace.empty()
                                      ? 0.0
                                      : rep.best_feasible_trace.back()},
                 {"iterations", rep.iterations},
                 {"converged", rep.converged},
                 {"stop_reason", rep.converged ? "residuals" : "max_iter"},
                 {"max_membership_error", rep.max_membership_error}};
    if (truth) summary["mse"] = mse(rep.z, *truth);
    if (opt.seed_report >= 0) summary["seed_report"] = opt.seed_report;
    emit(summary);
    return 0;
  }

  DescentParams params = default_params(f);
  params.sigma = opt.sigma;
  params.rho = opt.rho;
  params.c = opt.c;
  params.log_every = opt.log_every;
  if (opt.delta > 0) params.delta_stop = opt.delta;
  if (opt.max_iter > 0) params.max_iter = opt.max_iter;

  SolverReport rep = solve_intrinsic(
      initial_state(model, f), f, cfg, params,
      [&](long it, double energy, double change) {
        emit({{"iter", it}, {"energy", energy}, {"max_change", change}});
      });

  // the reconstruction of the decomposition models
  ManifoldImage result = rep.final_state.images[0];
  if (model == Model::IcMidpoint)
    result = midpoint_image(rep.final_state.images[0],
                            rep.final_state.images[1]);
  if (model == Model::IcLie)
    result = lie_compose_images(rep.final_state.images[0],
                                rep.final_state.images[1]);
  write_mvimg(opt.output, result);

  if (decompose) {
    if (model == Model::IcMidpoint || model == Model::IcLie) {
      write_mvimg(base("_v"), rep.final_state.images[0]);
      write_mvimg(base("_w"), rep.final_state.images[1]);
    } else if (model == Model::TgvLie) {
      write_mvimg(base("_a1"), rep.final_state.images[1]);
      write_mvimg(base("_a2"), rep.final_state.images[2]);
    } else if (model == Model::TgvPole) {
      // tangent components as CSV
      std::string path = opt.output;
      auto dot = path.rfind(".mvimg");
      if (dot != std::string::npos) path = path.substr(0, dot);
      path += "_xi.csv";
      std::ofstream os(path);
      const int rep_dim = f.manifold().rep_dim();
      os << "index";
      for (int k = 0; k < 2; ++k)
        for (int r = 0; r < rep_dim; ++r) os << ",xi" << k + 1 << "_" << r;
      os << "\n";
      for (int i = 0; i < f.size(); ++i) {
        os << i;
        for (int k = 0; k < 2; ++k)
          for (int r = 0; r < rep_dim; ++r)
            os << "," << rep.final_state.xi->component(i, k)[r];
        os << "\n";
      }
    }
  }

  json summary{
      {"final_energy", rep.energy_trace.back()},
      {"iterations", rep.iterations},
      {"stop_reason",
       rep.stop_reason == StopReason::MaxChange ? "max_change" : "max_iter"},
      {"line_search_stall", rep.line_search_stall}};
  if (truth) summary["mse"] = mse(result, *truth);
  if (opt.seed_report >= 0) summary["seed_report"] = opt.seed_report;
  emit(summary);
  return 0;
}

int run_gradcheck(const std::string& manifold_tag,
                  const std::string& model_filter, int directions, double h,
                  double tolerance, std::uint64_t seed) {
  struct Combo {
    std::string manifold;
    Model model;
  };
  std::vector<Combo> combos;
  std::vector<std::string> manifolds =
      manifold_tag.empty()
          ? std::vector<std::string>{"s1", "s2", "so3", "spd2"}
          : std::vector<std::string>{manifold_tag};
  for (const auto& mt : manifolds) {
    std::vector<Model> models;
    if (model_filter.empty()) {
      models = {Model::Additive, Model::IcMidpoint, Model::TgvPole};
      if (make_manifold(mt)->lie_group()) {
        models.push_back(Model::IcLie);
        models.push_back(Model::TgvLie);
      }
    } else {
      models = {model_from_name(model_filter)};
    }
    for (Model mdl : models) combos.push_back({mt, mdl});
  }

  int failures = 0;
  for (const auto& combo : combos) {
    auto m = make_manifold(combo.manifold);
    ManifoldImage f = random_image(m, 6, 5, 0.25, seed);
    ModelConfig cfg{combo.model, 0.7, 0.35, 1e-2};
    State state = random_check_state(combo.model, f, seed + 1);
    GradCheckResult res =
        gradient_fd_check(state, f, cfg, directions, h, tolerance, seed + 2);
    emit({{"manifold", combo.manifold},
          {"model", model_name(combo.model)},
          {"directions", res.checked},
          {"failed", res.failed},
          {"worst_rel_err", res.worst_rel_err}});
    failures += res.failed;
    seed += 3;
  }
  return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational denoising and decomposition of manifold-valued "
               "images"};
  app.require_subcommand(1);

  SolveOptions solve_opt, dec_opt;
  CLI::App* denoise = app.add_subcommand("denoise", "restore an image");
  add_solve_flags(denoise, solve_opt);
  CLI::App* decompose = app.add_subcommand(
      "decompose", "restore and write the model components");
  add_solve_flags(decompose, dec_opt);

  std::string noise_in, noise_out, noise_kind = "tangent_gaussian";
  double noise_sigma = 0.1;
  std::uint64_t noise_seed = 0;
  CLI::App* noise_cmd = app.add_subcommand("noise", "corrupt an image");
  noise_cmd->add_option("--input", noise_in)->required();
  noise_cmd->add_option("--output", noise_out)->required();
  noise_cmd->add_option("--kind", noise_kind,
                        "wrapped_gaussian|tangent_gaussian");
  noise_cmd->add_option("--noise-sigma", noise_sigma, "noise level");
  noise_cmd->add_option("--seed", noise_seed, "RNG seed");

  std::string mse_a, mse_b;
  CLI::App* mse_cmd = app.add_subcommand("mse", "mean squared geodesic error");
  mse_cmd->add_option("a", mse_a)->required();
  mse_cmd->add_option("b", mse_b)->required();

  std::string synth_name, synth_out;
  bool synth_list = false;
  CLI::App* synth_cmd = app.add_subcommand("synth", "synthetic fixtures");
  synth_cmd->add_option("--name", synth_name);
  synth_cmd->add_option("--output", synth_out);
  synth_cmd->add_flag("--list", synth_list, "list fixture names");

  std::string gc_manifold, gc_model;
  int gc_directions = 200;
  double gc_h = 1e-5, gc_tol = 1e-4;
  std::uint64_t gc_seed = 20240915;
  CLI::App* gc = app.add_subcommand(
      "gradcheck", "finite-difference validation of the gradients");
  gc->add_option("--manifold", gc_manifold, "restrict to one manifold");
  gc->add_option("--model", gc_model, "restrict to one model");
  gc->add_option("--directions", gc_directions);
  gc->add_option("--fd-step", gc_h, "finite-difference step");
  gc->add_option("--tol", gc_tol, "relative error tolerance");
  gc->add_option("--seed", gc_seed);

  std::string plot_in, plot_out;
  CLI::App* plot = app.add_subcommand(
      "plotdata", "CSV dump of an image (one record per pixel)");
  plot->add_option("--input", plot_in)->required();
  plot->add_option("--output", plot_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints usage text
    return code == 0 ? 0 : 1;
  }

  try {
    if (*denoise) return run_solve(solve_opt, false);
    if (*decompose) return run_solve(dec_opt, true);
    if (*noise_cmd) {
      ManifoldImage u = read_mvimg(noise_in);
      NoiseSpec spec{noise_kind_from_name(noise_kind), noise_sigma,
                     noise_seed};
      write_mvimg(noise_out, add_noise(u, spec));
      return 0;
    }
    if (*mse_cmd) {
      ManifoldImage a = read_mvimg(mse_a);
      ManifoldImage b = read_mvimg(mse_b);
      std::cout << mse(a, b) << "\n";
      return 0;
    }
    if (*synth_cmd) {
      if (synth_list) {
        for (const auto& name : synth_names()) std::cout << name << "\n";
        return 0;
      }
      if (synth_name.empty() || synth_out.empty())
        throw IoError("synth needs --name and --output");
      write_mvimg(synth_out, synth(synth_name));
      return 0;
    }
    if (*gc)
      return run_gradcheck(gc_manifold, gc_model, gc_directions, gc_h, gc_tol,
                           gc_seed);
    if (*plot) {
      ManifoldImage u = read_mvimg(plot_in);
      std::ofstream os(plot_out);
      if (!os) throw IoError("cannot open " + plot_out);
      os << "index";
      for (int r = 0; r < u.manifold().rep_dim(); ++r) os << ",v" << r;
      os << "\n";
      for (int i = 0; i < u.size(); ++i) {
        os << i;
        for (int r = 0; r < u.manifold().rep_dim(); ++r)
          os << "," << u.pixel(i)[r];
        os << "\n";
      }
      return 0;
    }
  } catch (const GeometryError& err) {
    std::cerr << "numerical failure: " << err.what() << "\n";
    return 2;
  } catch (const IoError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 1;
}
