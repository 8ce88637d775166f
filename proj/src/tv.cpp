#include "hssr/tv.hpp"

#include <cmath>
#include <stdexcept>

namespace hssr {

namespace {

void check_epsilon(const TvConfig& cfg) {
  if (!(cfg.epsilon > 0.0)) {
    throw std::invalid_argument("tv epsilon must be positive");
  }
}

// Applies fn(a, b) to every (value, predecessor) pair along all three modes.
template <typename Fn>
void for_each_difference(const Cube& x, Fn&& fn) {
  const Shape s = x.shape();
  for (int i = 0; i < s.h; ++i) {
    for (int j = 0; j < s.w; ++j) {
      for (int k = 0; k < s.b; ++k) {
        if (k > 0) fn(i, j, k, i, j, k - 1);
        if (j > 0) fn(i, j, k, i, j - 1, k);
        if (i > 0) fn(i, j, k, i - 1, j, k);
      }
    }
  }
}

}  // namespace

double tv_value(const Cube& x) {
  double acc = 0.0;
  for_each_difference(x, [&](int i, int j, int k, int pi, int pj, int pk) {
    acc += std::fabs(x(i, j, k) - x(pi, pj, pk));
  });
  return acc;
}

double tv_smoothed_value(const Cube& x, const TvConfig& cfg) {
  check_epsilon(cfg);
  const double e2 = cfg.epsilon * cfg.epsilon;
  double acc = 0.0;
  for_each_difference(x, [&](int i, int j, int k, int pi, int pj, int pk) {
    const double t = x(i, j, k) - x(pi, pj, pk);
    acc += std::sqrt(t * t + e2) - cfg.epsilon;
  });
  return acc;
}

Cube tv_smoothed_grad(const Cube& x, const TvConfig& cfg) {
  check_epsilon(cfg);
  const double e2 = cfg.epsilon * cfg.epsilon;
  Cube g(x.shape());
  for_each_difference(x, [&](int i, int j, int k, int pi, int pj, int pk) {
    const double t = x(i, j, k) - x(pi, pj, pk);
    const double d = t / std::sqrt(t * t + e2);
    g(i, j, k) += d;
    g(pi, pj, pk) -= d;
  });
  return g;
}

std::size_t tv_term_count(Shape s) {
  const auto h = static_cast<std::size_t>(s.h);
  const auto w = static_cast<std::size_t>(s.w);
  const auto b = static_cast<std::size_t>(s.b);
  return h * w * (b - 1) + h * (w - 1) * b + (h - 1) * w * b;
}

}  // namespace hssr
