#pragma once

// Dense 3-order tensor (height x width x bands) and its mode unfoldings.
//
// Memory layout is row-major with the band index fastest:
//     linear(i, j, k) = (i*W + j)*B + k        (zero-based).
// This layout is part of the on-disk cube format, so it must not change.
//
// Mode-n unfolding sends entry (i1, i2, i3) to row i_n; the column cycles
// the two remaining indices with the lower-numbered mode fastest: for
// remaining modes p < q with extents Ip, Iq,
//     col = i_p + i_q * Ip.
// fold() is the exact inverse under the same convention.

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "hssr/errors.hpp"

namespace hssr {

struct Shape {
  int h = 0;
  int w = 0;
  int b = 0;

  std::size_t size() const {
    return static_cast<std::size_t>(h) * static_cast<std::size_t>(w) *
           static_cast<std::size_t>(b);
  }
  friend bool operator==(const Shape&, const Shape&) = default;
};

class Cube {
 public:
  Cube() = default;

  // Zero-filled cube of the given shape.
  explicit Cube(Shape s);

  // Takes ownership of `values` (layout as documented above). Rejects a
  // length mismatch and any non-finite entry.
  Cube(Shape s, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  int height() const { return shape_.h; }
  int width() const { return shape_.w; }
  int bands() const { return shape_.b; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * shape_.w + j) * shape_.b + k;
  }
  double operator()(int i, int j, int k) const { return values_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return values_[index(i, j, k)]; }

  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }
  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const Cube&, const Cube&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

struct UnfoldedMatrix {
  int mode = 0;            // 1, 2, or 3
  Eigen::MatrixXd values;  // rows = extent of `mode`
};

UnfoldedMatrix unfold(const Cube& x, int mode);
Cube fold(const Eigen::MatrixXd& m, int mode, Shape dims);
Cube fold(const UnfoldedMatrix& m, int mode, Shape dims);

double frobenius_norm(const Cube& x);
double dot(const Cube& a, const Cube& b);

Cube add(const Cube& a, const Cube& b);
Cube sub(const Cube& a, const Cube& b);
Cube scale(const Cube& a, double c);
void axpy(double c, const Cube& x, Cube& y);  // y += c*x

}  // namespace hssr
