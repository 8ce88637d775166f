#include "hssr/cube.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hssr {

namespace {

void check_shape_positive(const Shape& s) {
  if (s.h <= 0 || s.w <= 0 || s.b <= 0) {
    throw ShapeError("cube dims must be positive, got " + std::to_string(s.h) +
                     "x" + std::to_string(s.w) + "x" + std::to_string(s.b));
  }
}

void check_same_shape(const Cube& a, const Cube& b, const char* op) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError(std::string(op) + ": shape mismatch");
  }
}

}  // namespace

Cube::Cube(Shape s) : shape_(s) {
  check_shape_positive(s);
  values_.assign(s.size(), 0.0);
}

Cube::Cube(Shape s, std::vector<double> values)
    : shape_(s), values_(std::move(values)) {
  check_shape_positive(s);
  if (values_.size() != s.size()) {
    throw ShapeError("cube data length " + std::to_string(values_.size()) +
                     " does not match dims " + std::to_string(s.h) + "x" +
                     std::to_string(s.w) + "x" + std::to_string(s.b));
  }
  for (std::size_t n = 0; n < values_.size(); ++n) {
    if (!std::isfinite(values_[n])) {
      throw std::invalid_argument("cube value at linear index " +
                                  std::to_string(n) + " is not finite");
    }
  }
}

UnfoldedMatrix unfold(const Cube& x, int mode) {
  if (mode < 1 || mode > 3) {
    throw std::invalid_argument("unfold: mode must be 1, 2, or 3, got " +
                                std::to_string(mode));
  }
  const Shape s = x.shape();
  const int ext[3] = {s.h, s.w, s.b};
  const int m = mode - 1;
  const int p = (m == 0) ? 1 : 0;        // lower remaining mode (fastest)
  const int q = (m == 2) ? 1 : 2;        // higher remaining mode
  const int rows = ext[m];
  const int cols = ext[p] * ext[q];

  UnfoldedMatrix out;
  out.mode = mode;
  out.values.resize(rows, cols);
  int idx[3];
  for (idx[0] = 0; idx[0] < ext[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < ext[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < ext[2]; ++idx[2]) {
        out.values(idx[m], idx[p] + idx[q] * ext[p]) =
            x(idx[0], idx[1], idx[2]);
      }
    }
  }
  return out;
}

Cube fold(const Eigen::MatrixXd& m, int mode, Shape dims) {
  if (mode < 1 || mode > 3) {
    throw std::invalid_argument("fold: mode must be 1, 2, or 3, got " +
                                std::to_string(mode));
  }
  check_shape_positive(dims);
  const int ext[3] = {dims.h, dims.w, dims.b};
  const int n = mode - 1;
  const int p = (n == 0) ? 1 : 0;
  const int q = (n == 2) ? 1 : 2;
  if (m.rows() != ext[n] || static_cast<std::size_t>(m.size()) != dims.size()) {
    throw ShapeError("fold: matrix " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + " does not match mode " +
                     std::to_string(mode) + " of dims " +
                     std::to_string(dims.h) + "x" + std::to_string(dims.w) +
                     "x" + std::to_string(dims.b));
  }

  Cube out(dims);
  int idx[3];
  for (idx[0] = 0; idx[0] < ext[0]; ++idx[0]) {
    for (idx[1] = 0; idx[1] < ext[1]; ++idx[1]) {
      for (idx[2] = 0; idx[2] < ext[2]; ++idx[2]) {
        out(idx[0], idx[1], idx[2]) =
            m(idx[n], idx[p] + idx[q] * ext[p]);
      }
    }
  }
  return out;
}

Cube fold(const UnfoldedMatrix& m, int mode, Shape dims) {
  return fold(m.values, mode, dims);
}

double frobenius_norm(const Cube& x) {
  double acc = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) acc += x.data()[n] * x.data()[n];
  return std::sqrt(acc);
}

double dot(const Cube& a, const Cube& b) {
  check_same_shape(a, b, "dot");
  double acc = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) acc += a.data()[n] * b.data()[n];
  return acc;
}

Cube add(const Cube& a, const Cube& b) {
  check_same_shape(a, b, "add");
  Cube out(a.shape());
  for (std::size_t n = 0; n < a.size(); ++n)
    out.data()[n] = a.data()[n] + b.data()[n];
  return out;
}

Cube sub(const Cube& a, const Cube& b) {
  check_same_shape(a, b, "sub");
  Cube out(a.shape());
  for (std::size_t n = 0; n < a.size(); ++n)
    out.data()[n] = a.data()[n] - b.data()[n];
  return out;
}

Cube scale(const Cube& a, double c) {
  Cube out(a.shape());
  for (std::size_t n = 0; n < a.size(); ++n) out.data()[n] = c * a.data()[n];
  return out;
}

void axpy(double c, const Cube& x, Cube& y) {
  check_same_shape(x, y, "axpy");
  for (std::size_t n = 0; n < x.size(); ++n) y.data()[n] += c * x.data()[n];
}

}  // namespace hssr
