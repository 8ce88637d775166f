#include "hssr/lowrank.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hssr {

namespace {

void check_finite(const Eigen::MatrixXd& a, const char* op) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(op) + ": non-finite entry");
  }
}

}  // namespace

void validate(const McpParams& p) {
  if (!(p.lambda > 0.0)) {
    throw std::invalid_argument("mcp lambda must be positive");
  }
  if (!(p.a > 1.0)) {
    throw std::invalid_argument("mcp a must be > 1");
  }
}

void validate(const ModeWeights& w) {
  double sum = 0.0;
  for (double a : w.alpha) {
    if (a < 0.0) throw std::invalid_argument("mode weights must be nonnegative");
    sum += a;
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("mode weights must sum to 1, got " +
                                std::to_string(sum));
  }
}

SvdFactors svd(const Eigen::MatrixXd& a) {
  check_finite(a, "svd");
  Eigen::JacobiSVD<Eigen::MatrixXd> dec(a,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors f;
  f.u = dec.matrixU();
  f.s = dec.singularValues();
  f.v = dec.matrixV();
  for (Eigen::Index c = 0; c < f.u.cols(); ++c) {
    for (Eigen::Index r = 0; r < f.u.rows(); ++r) {
      const double e = f.u(r, c);
      if (e != 0.0) {
        if (e < 0.0) {
          f.u.col(c) = -f.u.col(c);
          f.v.col(c) = -f.v.col(c);
        }
        break;
      }
    }
  }
  return f;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
  check_finite(a, "singular_values");
  return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

Eigen::MatrixXd svt(const Eigen::MatrixXd& a, double tau) {
  if (tau < 0.0) throw std::invalid_argument("svt tau must be nonnegative");
  SvdFactors f = svd(a);
  const Eigen::VectorXd shrunk = (f.s.array() - tau).max(0.0);
  return f.u * shrunk.asDiagonal() * f.v.transpose();
}

double mcp_value(double t, const McpParams& p) {
  const double at = std::fabs(t);
  if (at >= p.a * p.lambda) return p.a * p.lambda * p.lambda / 2.0;
  return p.lambda * at - t * t / (2.0 * p.a);
}

double mcp_matrix_value(const Eigen::MatrixXd& a, const McpParams& p) {
  validate(p);
  const Eigen::VectorXd s = singular_values(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += mcp_value(s(i), p);
  return acc;
}

double nuclear_norm(const Eigen::MatrixXd& a) {
  return singular_values(a).sum();
}

double tensor_nuclear(const Cube& x, const ModeWeights& w) {
  validate(w);
  double acc = 0.0;
  for (int mode = 1; mode <= 3; ++mode) {
    if (w.alpha[mode - 1] == 0.0) continue;
    acc += w.alpha[mode - 1] * nuclear_norm(unfold(x, mode).values);
  }
  return acc;
}

double tensor_mcp(const Cube& x, const ModeWeights& w, const McpParams& p) {
  validate(w);
  validate(p);
  double acc = 0.0;
  for (int mode = 1; mode <= 3; ++mode) {
    if (w.alpha[mode - 1] == 0.0) continue;
    acc += w.alpha[mode - 1] * mcp_matrix_value(unfold(x, mode).values, p);
  }
  return acc;
}

Eigen::VectorXd mcp_weights(const Eigen::VectorXd& s, const McpParams& p) {
  validate(p);
  return (p.lambda - s.array() / p.a).max(0.0);
}

Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& a, double tau,
                             const Eigen::VectorXd& w) {
  if (tau < 0.0) {
    throw std::invalid_argument("weighted_svt tau must be nonnegative");
  }
  if ((w.array() < 0.0).any()) {
    throw std::invalid_argument("weighted_svt weights must be nonnegative");
  }
  SvdFactors f = svd(a);
  if (w.size() < f.s.size()) {
    throw std::invalid_argument("weighted_svt: need a weight per singular value");
  }
  Eigen::VectorXd shrunk(f.s.size());
  for (Eigen::Index i = 0; i < f.s.size(); ++i) {
    shrunk(i) = std::max(f.s(i) - tau * w(i), 0.0);
  }
  return f.u * shrunk.asDiagonal() * f.v.transpose();
}

}  // namespace hssr
