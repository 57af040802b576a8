#pragma once

#include <optional>
#include <vector>

#include "mvd/differences.hpp"
#include "mvd/image.hpp"

namespace mvd {

enum class Model {
  Tv,
  Additive,
  IcMidpoint,
  TgvPole,
  IcLie,
  TgvLie,
  ExtIc,
  ExtTgv,
  ExtAdditive
};

Model model_from_name(const std::string& name);
std::string model_name(Model model);
bool model_is_extrinsic(Model model);

struct ModelConfig {
  Model model{Model::Tv};
  double alpha{1.0};
  double beta{1.0};       // beta = 1 recovers the pure first-order prior
  double epsilon{0.0};    // smoothing; must be > 0 for gradient solving
};

void validate(const ModelConfig& cfg);

struct EnergyValue {
  double total{0};
  double data_part{0};
  double prior_part{0};  // prior without the alpha factor
};

// Primal variables of one model: one image (tv/additive), two images
// (ic models), three images (tgv_lie), or an image plus a two-component
// tangent field (tgv_pole).
struct State {
  std::vector<ManifoldImage> images;
  std::optional<TangentField> xi;
};

State initial_state(Model model, const ManifoldImage& f);

double data_term(const ManifoldImage& u, const ManifoldImage& f);
double tv_int(const ManifoldImage& u, double eps);
double tv2_int(const ManifoldImage& u, double eps);
double tv2_lie(const ManifoldImage& u, double eps);

EnergyValue energy_additive(const ManifoldImage& u, const ManifoldImage& f,
                            const ModelConfig& cfg);
EnergyValue energy_ic_midpoint(const ManifoldImage& v, const ManifoldImage& w,
                               const ManifoldImage& f, const ModelConfig& cfg);
EnergyValue energy_tgv_pole(const ManifoldImage& u, const TangentField& xi,
                            const ManifoldImage& f, const ModelConfig& cfg);
EnergyValue energy_ic_lie(const ManifoldImage& v, const ManifoldImage& w,
                          const ManifoldImage& f, const ModelConfig& cfg);
EnergyValue energy_tgv_lie(const ManifoldImage& u, const ManifoldImage& a1,
                           const ManifoldImage& a2, const ManifoldImage& f,
                           const ModelConfig& cfg);

EnergyValue energy(const State& state, const ManifoldImage& f,
                   const ModelConfig& cfg);

// Pixelwise gamma(v, w; 1/2), the reconstruction of the midpoint IC model.
ManifoldImage midpoint_image(const ManifoldImage& v, const ManifoldImage& w);
// Pixelwise v o w, the reconstruction of the Lie IC model.
ManifoldImage lie_compose_images(const ManifoldImage& v,
                                 const ManifoldImage& w);

}  // namespace mvd
