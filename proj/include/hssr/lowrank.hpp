#pragma once

// Spectral penalties and their proximal maps.
//
// Two penalties act on the singular values of each mode unfolding:
//   - nuclear norm, sum of singular values; its prox is soft thresholding of
//     the spectrum (svt);
//   - minimax concave (MCP) value, lambda*|t| - t^2/(2a) below a*lambda and
//     the constant a*lambda^2/2 beyond, which leaves large singular values
//     unpenalized.
// The MCP prox is handled by one linearization step: weights
// (lambda - sigma/a)_+ taken at the current spectrum turn the problem into a
// weighted nuclear norm minimization, solved in closed form by weighted_svt.
//
// Note on thresholds: the weighted shrinkage uses the same tau base as the
// unweighted case, so weighted_svt with all-ones weights reproduces svt
// exactly.

#include <Eigen/Dense>
#include <array>

#include "hssr/cube.hpp"

namespace hssr {

struct SvdFactors {
  Eigen::MatrixXd u;   // rows x r, orthonormal columns
  Eigen::VectorXd s;   // r nonincreasing nonnegative values
  Eigen::MatrixXd v;   // cols x r, orthonormal columns
};

struct McpParams {
  double lambda = 1.0;
  double a = 2.0;  // concavity, > 1
};

struct ModeWeights {
  std::array<double, 3> alpha = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

  static ModeWeights uniform() { return ModeWeights{}; }
};

void validate(const McpParams& p);
void validate(const ModeWeights& w);

// Thin SVD with deterministic signs: each column of u has a nonnegative
// first nonzero entry (v flipped to match).
SvdFactors svd(const Eigen::MatrixXd& a);

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

// Prox of tau*||.||_*: soft-thresholds the spectrum by tau.
Eigen::MatrixXd svt(const Eigen::MatrixXd& a, double tau);

double mcp_value(double t, const McpParams& p);
double mcp_matrix_value(const Eigen::MatrixXd& a, const McpParams& p);

double nuclear_norm(const Eigen::MatrixXd& a);
double tensor_nuclear(const Cube& x, const ModeWeights& w);
double tensor_mcp(const Cube& x, const ModeWeights& w, const McpParams& p);

// Linearization weights (lambda - s_j/a)_+ for a nonincreasing spectrum s;
// the result is nondecreasing.
Eigen::VectorXd mcp_weights(const Eigen::VectorXd& s, const McpParams& p);

// Weighted spectrum shrinkage U diag((s_j - tau*w_j)_+) V'. Exact minimizer
// of sum_j tau*w_j*sigma_j(M) + 1/2||M - a||_F^2 when w is nondecreasing.
Eigen::MatrixXd weighted_svt(const Eigen::MatrixXd& a, double tau,
                             const Eigen::VectorXd& w);

}  // namespace hssr
