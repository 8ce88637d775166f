#pragma once

// Deterministic Gaussian stream: mt19937_64 driving 53-bit uniforms through
// the Box-Muller transform. std::normal_distribution is avoided because its
// draw sequence is not pinned by the standard; this stream depends only on
// the seed.

#include <cmath>
#include <cstdint>
#include <random>

namespace hssr {

inline constexpr double kTwoPi = 6.283185307179586476925287;

class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform draw in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal draw.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = kTwoPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hssr
