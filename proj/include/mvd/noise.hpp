#pragma once

#include <cstdint>

#include "mvd/image.hpp"

namespace mvd {

enum class NoiseKind { WrappedGaussian, TangentGaussian };

struct NoiseSpec {
  NoiseKind kind{NoiseKind::TangentGaussian};
  double sigma{0.1};
  std::uint64_t seed{0};
};

NoiseKind noise_kind_from_name(const std::string& name);

// Wrapped Gaussian adds N(0, sigma^2) to angles (S^1 only); tangent
// Gaussian applies exp of i.i.d. N(0, sigma^2) coefficients in a
// metric-orthonormal tangent frame.  Deterministic given the seed.
ManifoldImage add_noise(const ManifoldImage& u, const NoiseSpec& spec);

}  // namespace mvd
