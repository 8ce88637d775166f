#pragma once

// Observation operators: per-band Gaussian blur, decimation, additive noise,
// their exact adjoints, and the bicubic interpolation baseline.
//
// The forward operator maps a high-resolution cube X to the observation
//     I = downsample(blur(X)) + noise.
// Blur uses symmetric boundary reflection with edge repeat (x[-1] = x[0]),
// which makes each band's blur matrix doubly stochastic: constants and band
// means are preserved. The adjoint is implemented as the exact transpose of
// the blur/decimation loops, so <Ax, y> == <x, A'y> holds to rounding.

#include <cstdint>
#include <vector>

#include "hssr/cube.hpp"

namespace hssr {

struct BlurKernel {
  int size = 0;                  // odd
  double sigma = 0.0;
  std::vector<double> weights;   // size*size, row-major, sums to 1

  double at(int u, int v) const { return weights[u * size + v]; }
};

// Normalized Gaussian tap matrix on the centered size x size grid.
BlurKernel gaussian_kernel(int size, double sigma);

struct DegradationConfig {
  BlurKernel kernel = gaussian_kernel(7, 2.0);
  int factor = 2;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

Cube blur(const Cube& x, const BlurKernel& k);
Cube adjoint_blur(const Cube& r, const BlurKernel& k);

// output(i, j, k) = input(r*i, r*j, k); requires H and W divisible by r.
Cube downsample(const Cube& x, int factor);

// Adjoint of downsample: values placed on the r-strided grid, zeros elsewhere.
Cube zero_upsample(const Cube& x, int factor, int h, int w);

// Noise-free forward operator downsample(blur(x)).
Cube degrade_clean(const Cube& x, const DegradationConfig& cfg);

// Forward operator plus i.i.d. Gaussian noise of std noise_sigma, drawn from
// a stream seeded by cfg.seed. noise_sigma == 0 adds nothing.
Cube degrade(const Cube& x, const DegradationConfig& cfg);

// Transpose of degrade_clean; hr_dims names the high-resolution target shape.
Cube adjoint_degrade(const Cube& res, const DegradationConfig& cfg, Shape hr_dims);

// Per-band Keys bicubic interpolation (a = -0.5), aligned so that
// output(r*i, r*j) equals input(i, j).
Cube bicubic_upsample(const Cube& x, int factor);

}  // namespace hssr
