#pragma once

#include <string>
#include <vector>

#include "mvd/image.hpp"

namespace mvd {

// Named synthetic fixtures: piecewise-geodesic signals and test images on
// each manifold.  Deterministic.
ManifoldImage synth(const std::string& name);
std::vector<std::string> synth_names();

}  // namespace mvd
