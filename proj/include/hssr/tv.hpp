#pragma once

// Anisotropic 3D total variation: the l1 sum of first differences along the
// two spatial modes and the spectral mode, with predecessor-only terms (no
// wraparound). The smoothed form replaces |t| by sqrt(t^2 + eps^2) - eps,
// which is differentiable everywhere and within eps of |t| per term.

#include "hssr/cube.hpp"

namespace hssr {

struct TvConfig {
  double epsilon = 1e-3;
};

double tv_value(const Cube& x);
double tv_smoothed_value(const Cube& x, const TvConfig& cfg);
Cube tv_smoothed_grad(const Cube& x, const TvConfig& cfg);

// Number of difference terms for the given dims.
std::size_t tv_term_count(Shape s);

}  // namespace hssr
