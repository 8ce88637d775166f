#include "hssr/degradation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hssr/rng.hpp"

namespace hssr {

namespace {

// Symmetric reflection with edge repeat: ... x1 x0 | x0 x1 ... xN-1 | xN-1 ...
int reflect(int t, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  t %= period;
  if (t < 0) t += period;
  return t < n ? t : period - 1 - t;
}

double keys_cubic(double t) {
  constexpr double a = -0.5;
  t = std::fabs(t);
  if (t <= 1.0) return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
  if (t < 2.0) return a * (((t - 5.0) * t + 8.0) * t - 4.0);
  return 0.0;
}

void check_factor(int factor) {
  if (factor < 1) {
    throw std::invalid_argument("factor must be >= 1, got " +
                                std::to_string(factor));
  }
}

}  // namespace

BlurKernel gaussian_kernel(int size, double sigma) {
  if (size < 1 || size % 2 == 0) {
    throw std::invalid_argument("kernel size must be odd and positive, got " +
                                std::to_string(size));
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("kernel sigma must be positive");
  }
  BlurKernel k;
  k.size = size;
  k.sigma = sigma;
  k.weights.resize(static_cast<std::size_t>(size) * size);
  const int c = size / 2;
  double sum = 0.0;
  for (int u = 0; u < size; ++u) {
    for (int v = 0; v < size; ++v) {
      const double du = u - c;
      const double dv = v - c;
      const double w = std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
      k.weights[u * size + v] = w;
      sum += w;
    }
  }
  for (double& w : k.weights) w /= sum;
  return k;
}

Cube blur(const Cube& x, const BlurKernel& k) {
  const Shape s = x.shape();
  const int c = k.size / 2;
  Cube out(s);
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      double* acc = out.data() + out.index(i, j, 0);
      for (int u = 0; u < k.size; ++u) {
        const int si = reflect(i + u - c, s.h);
        for (int v = 0; v < k.size; ++v) {
          const int sj = reflect(j + v - c, s.w);
          const double w = k.at(u, v);
          const double* src = x.data() + x.index(si, sj, 0);
          for (int band = 0; band < s.b; ++band) acc[band] += w * src[band];
        }
      }
    }
  }
  return out;
}

Cube adjoint_blur(const Cube& r, const BlurKernel& k) {
  const Shape s = r.shape();
  const int c = k.size / 2;
  Cube out(s);
  // Scatter form of the gather loop in blur(); transposes it tap by tap.
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      const double* src = r.data() + r.index(i, j, 0);
      for (int u = 0; u < k.size; ++u) {
        const int si = reflect(i + u - c, s.h);
        for (int v = 0; v < k.size; ++v) {
          const int sj = reflect(j + v - c, s.w);
          const double w = k.at(u, v);
          double* acc = out.data() + out.index(si, sj, 0);
          for (int band = 0; band < s.b; ++band) acc[band] += w * src[band];
        }
      }
    }
  }
  return out;
}

Cube downsample(const Cube& x, int factor) {
  check_factor(factor);
  const Shape s = x.shape();
  if (s.h % factor != 0 || s.w % factor != 0) {
    throw ShapeError("downsample: dims " + std::to_string(s.h) + "x" +
                     std::to_string(s.w) + " not divisible by factor " +
                     std::to_string(factor));
  }
  if (factor == 1) return x;
  Cube out({s.h / factor, s.w / factor, s.b});
  for (int i = 0; i < out.height(); ++i)
    for (int j = 0; j < out.width(); ++j)
      for (int k = 0; k < s.b; ++k)
        out(i, j, k) = x(factor * i, factor * j, k);
  return out;
}

Cube zero_upsample(const Cube& x, int factor, int h, int w) {
  check_factor(factor);
  const Shape s = x.shape();
  if (s.h * factor != h || s.w * factor != w) {
    throw ShapeError("zero_upsample: " + std::to_string(s.h) + "x" +
                     std::to_string(s.w) + " times factor " +
                     std::to_string(factor) + " does not give " +
                     std::to_string(h) + "x" + std::to_string(w));
  }
  if (factor == 1) return x;
  Cube out({h, w, s.b});
  for (int i = 0; i < s.h; ++i)
    for (int j = 0; j < s.w; ++j)
      for (int k = 0; k < s.b; ++k)
        out(factor * i, factor * j, k) = x(i, j, k);
  return out;
}

Cube degrade_clean(const Cube& x, const DegradationConfig& cfg) {
  return downsample(blur(x, cfg.kernel), cfg.factor);
}

Cube degrade(const Cube& x, const DegradationConfig& cfg) {
  if (cfg.noise_sigma < 0.0) {
    throw std::invalid_argument("noise_sigma must be nonnegative");
  }
  Cube y = degrade_clean(x, cfg);
  if (cfg.noise_sigma > 0.0) {
    GaussianStream noise(cfg.seed);
    for (std::size_t n = 0; n < y.size(); ++n)
      y.data()[n] += cfg.noise_sigma * noise.normal();
  }
  return y;
}

Cube adjoint_degrade(const Cube& res, const DegradationConfig& cfg,
                     Shape hr_dims) {
  const Shape s = res.shape();
  if (s.h * cfg.factor != hr_dims.h || s.w * cfg.factor != hr_dims.w ||
      s.b != hr_dims.b) {
    throw ShapeError("adjoint_degrade: residual dims " + std::to_string(s.h) +
                     "x" + std::to_string(s.w) + "x" + std::to_string(s.b) +
                     " inconsistent with target " + std::to_string(hr_dims.h) +
                     "x" + std::to_string(hr_dims.w) + "x" +
                     std::to_string(hr_dims.b) + " at factor " +
                     std::to_string(cfg.factor));
  }
  return adjoint_blur(zero_upsample(res, cfg.factor, hr_dims.h, hr_dims.w),
                      cfg.kernel);
}

Cube bicubic_upsample(const Cube& x, int factor) {
  check_factor(factor);
  if (factor == 1) return x;
  const Shape s = x.shape();
  Cube out({s.h * factor, s.w * factor, s.b});
  const double inv = 1.0 / factor;
  for (int p = 0; p < out.height(); ++p) {
    const double si = p * inv;
    const int i0 = static_cast<int>(std::floor(si));
    double wi[4];
    int ti[4];
    for (int t = 0; t < 4; ++t) {
      const int m = i0 - 1 + t;
      wi[t] = keys_cubic(si - m);
      ti[t] = std::min(std::max(m, 0), s.h - 1);
    }
    for (int q = 0; q < out.width(); ++q) {
      const double sj = q * inv;
      const int j0 = static_cast<int>(std::floor(sj));
      double wj[4];
      int tj[4];
      for (int t = 0; t < 4; ++t) {
        const int m = j0 - 1 + t;
        wj[t] = keys_cubic(sj - m);
        tj[t] = std::min(std::max(m, 0), s.w - 1);
      }
      double* acc = out.data() + out.index(p, q, 0);
      for (int u = 0; u < 4; ++u) {
        for (int v = 0; v < 4; ++v) {
          const double w = wi[u] * wj[v];
          if (w == 0.0) continue;
          const double* src = x.data() + x.index(ti[u], tj[v], 0);
          for (int band = 0; band < s.b; ++band) acc[band] += w * src[band];
        }
      }
    }
  }
  return out;
}

}  // namespace hssr
