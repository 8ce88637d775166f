#pragma once

// ADMM solver for blur-and-decimate super-resolution with smoothed 3D TV
// and a low-rank penalty (nuclear norm, or MCP via one linearization step)
// on the mode unfoldings.
//
// Splitting: one auxiliary M_i per mode tied to X by a scaled dual Y_i.
// Each outer iteration runs update_x (gradient descent with Armijo
// backtracking on the smoothed inner objective), update_m (per-mode
// singular value shrinkage), update_y (dual ascent), then grows rho by
// rho_growth up to a fixed cap.

#include <array>
#include <string>
#include <vector>

#include "hssr/cube.hpp"
#include "hssr/degradation.hpp"
#include "hssr/lowrank.hpp"
#include "hssr/tv.hpp"

namespace hssr {

enum class Penalty { Nuclear, Mcp };
enum class InitScheme { Bicubic, ZeroUpsample };

struct SolverConfig {
  double lambda1 = 1e-3;   // TV weight
  double lambda2 = 1e-2;   // low-rank weight
  double rho = 1.0;
  double rho_growth = 1.05;
  ModeWeights alpha;
  Penalty penalty = Penalty::Nuclear;
  McpParams mcp;
  TvConfig tv;
  int max_outer = 100;
  int max_inner = 10;      // gradient steps per update_x
  double tol = 1e-4;       // relative-change stop
  DegradationConfig degradation;
  InitScheme init = InitScheme::Bicubic;

  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;        // reporting objective with exact TV
  double primal_residual = 0.0;  // max_i ||M_i - X||_F
  double rel_change = 0.0;       // ||X_new - X_old||_F / max(1, ||X_old||_F)
  double rho = 0.0;              // value used during this iteration
};

struct SolverState {
  Cube x;
  std::array<Cube, 3> m;
  std::array<Cube, 3> y;
  double rho = 1.0;
  int iter = 0;
  std::vector<IterationRecord> trace;
};

struct UpdateXReport {
  double objective_before = 0.0;
  double objective_after = 0.0;
  int steps = 0;  // accepted gradient steps
};

struct SolveResult {
  Cube x;
  std::vector<IterationRecord> trace;
  bool converged = false;          // stopped on tol rather than max_outer
  // Max over all update_x calls of (inner objective after - before);
  // nonpositive whenever the descent contract held.
  double max_inner_increase = 0.0;
};

// Reporting objective: ||degrade_clean(x) - i_obs||_F^2 + lambda1 * tv_value
// + lambda2 * (tensor_nuclear | tensor_mcp).
double objective(const Cube& x, const Cube& i_obs, const SolverConfig& cfg);

// Inner objective of the X subproblem: fidelity + lambda1 * smoothed TV
// + sum_i (rho/2) ||M_i - x + Y_i/rho||_F^2, with rho, M, Y from `state`.
double subproblem1_objective(const Cube& x, const SolverState& state,
                             const Cube& i_obs, const SolverConfig& cfg);
Cube subproblem1_gradient(const Cube& x, const SolverState& state,
                          const Cube& i_obs, const SolverConfig& cfg);

// One block of gradient descent on the inner objective starting from
// state.x; never returns a point with larger inner objective.
Cube update_x(const SolverState& state, const Cube& i_obs,
              const SolverConfig& cfg, UpdateXReport* report = nullptr);

// Per-mode shrinkage of X_(i) - Y_(i)/rho: plain singular value
// thresholding for Nuclear, weighted thresholding with MCP tangent weights
// at the current X for Mcp. Threshold lambda2 * alpha_i / rho.
std::array<Cube, 3> update_m(const SolverState& state, const SolverConfig& cfg);

// Dual ascent Y_i + rho (M_i - X).
std::array<Cube, 3> update_y(const SolverState& state, const SolverConfig& cfg);

SolveResult solve(const Cube& i_obs, const SolverConfig& cfg);

// "iter=<k> obj=<v> pres=<v> dx=<v> rho=<v>", values printed with %.17g.
std::string format_trace_line(const IterationRecord& rec);

}  // namespace hssr
