#pragma once

#include <string>

#include "shrinklearn/spline.hpp"

namespace shrinklearn {

/// JSON model file; doubles round-trip exactly. Fields:
///   format ("shrinklearn-model"), version, degree, grid_halfwidth, delta,
///   init_threshold, coefficients.
struct Model {
  SplineNonlinearity nonlinearity;
  double init_threshold = 0.0;  // effective soft threshold at initialization
};

void save_model(const std::string& path, const Model& model);
Model load_model(const std::string& path);

}  // namespace shrinklearn
