#pragma once

// Reconstruction quality measures for (reference, estimate) cube pairs:
// PSNR in dB with the peak taken from the reference, mean spectral angle in
// radians, and ERGAS with the 100/r * RMS-of-relative-band-RMSE form.

#include "hssr/cube.hpp"

namespace hssr {

struct MetricsReport {
  double psnr = 0.0;   // dB, capped at 100 for an exact match
  double sam = 0.0;    // radians, in [0, pi]
  double ergas = 0.0;
  double mse = 0.0;
  int sam_skipped = 0;  // pixels excluded for an all-zero spectrum
};

double mse(const Cube& ref, const Cube& est);
double psnr(const Cube& ref, const Cube& est);

// Mean per-pixel angle between reference and estimated spectra. Pixels where
// either spectrum is identically zero are skipped; `skipped`, when given,
// receives their count.
double sam(const Cube& ref, const Cube& est, int* skipped = nullptr);

double ergas(const Cube& ref, const Cube& est, int ratio);

MetricsReport compute_metrics(const Cube& ref, const Cube& est, int ratio);

}  // namespace hssr
