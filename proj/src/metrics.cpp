#include "hssr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hssr {

namespace {

void check_same_dims(const Cube& ref, const Cube& est, const char* op) {
  if (!(ref.shape() == est.shape())) {
    throw ShapeError(std::string(op) + ": reference and estimate dims differ");
  }
}

}  // namespace

double mse(const Cube& ref, const Cube& est) {
  check_same_dims(ref, est, "mse");
  double acc = 0.0;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const double d = ref.data()[n] - est.data()[n];
    acc += d * d;
  }
  return acc / static_cast<double>(ref.size());
}

double psnr(const Cube& ref, const Cube& est) {
  check_same_dims(ref, est, "psnr");
  const double err = mse(ref, est);
  if (err == 0.0) return 100.0;
  const double peak = *std::max_element(ref.values().begin(), ref.values().end());
  return 10.0 * std::log10(peak * peak / err);
}

double sam(const Cube& ref, const Cube& est, int* skipped) {
  check_same_dims(ref, est, "sam");
  const Shape s = ref.shape();
  double acc = 0.0;
  int used = 0;
  int skip = 0;
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      const double* a = ref.data() + ref.index(i, j, 0);
      const double* b = est.data() + est.index(i, j, 0);
      double ab = 0.0, aa = 0.0, bb = 0.0;
      for (int k = 0; k < s.b; ++k) {
        ab += a[k] * b[k];
        aa += a[k] * a[k];
        bb += b[k] * b[k];
      }
      if (aa == 0.0 || bb == 0.0) {
        ++skip;
        continue;
      }
      const double c = std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
      acc += std::acos(c);
      ++used;
    }
  }
  if (skipped != nullptr) *skipped = skip;
  return used > 0 ? acc / used : 0.0;
}

double ergas(const Cube& ref, const Cube& est, int ratio) {
  check_same_dims(ref, est, "ergas");
  if (ratio < 1) throw std::invalid_argument("ergas ratio must be >= 1");
  const Shape s = ref.shape();
  const double pixels = static_cast<double>(s.h) * s.w;
  double acc = 0.0;
  for (int k = 0; k < s.b; ++k) {
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < s.h; ++i) {
      for (int j = 0; j < s.w; ++j) {
        const double d = ref(i, j, k) - est(i, j, k);
        sum += ref(i, j, k);
        sq += d * d;
      }
    }
    const double mean = sum / pixels;
    if (mean == 0.0) {
      throw std::domain_error("ergas: band " + std::to_string(k) +
                              " of the reference has zero mean");
    }
    const double rmse = std::sqrt(sq / pixels);
    acc += (rmse / mean) * (rmse / mean);
  }
  return 100.0 / ratio * std::sqrt(acc / s.b);
}

MetricsReport compute_metrics(const Cube& ref, const Cube& est, int ratio) {
  MetricsReport r;
  r.mse = mse(ref, est);
  r.psnr = psnr(ref, est);
  r.sam = sam(ref, est, &r.sam_skipped);
  r.ergas = ergas(ref, est, ratio);
  return r;
}

}  // namespace hssr
