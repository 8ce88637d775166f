#include "hssr/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <utility>

namespace hssr {

namespace {

constexpr double kRhoCap = 1e6;
constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxHalvings = 60;

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda1 >= 0.0)) throw std::invalid_argument("lambda1 must be nonnegative");
  if (!(lambda2 >= 0.0)) throw std::invalid_argument("lambda2 must be nonnegative");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (!(rho_growth >= 1.0)) throw std::invalid_argument("rho_growth must be at least 1");
  hssr::validate(alpha);
  hssr::validate(mcp);
  if (!(tv.epsilon > 0.0)) throw std::invalid_argument("tv epsilon must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be positive");
  if (max_inner < 1) throw std::invalid_argument("max_inner must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (degradation.factor < 1) throw std::invalid_argument("factor must be positive");
  if (!(degradation.noise_sigma >= 0.0)) {
    throw std::invalid_argument("noise_sigma must be nonnegative");
  }
}

double objective(const Cube& x, const Cube& i_obs, const SolverConfig& cfg) {
  const Cube r = sub(degrade_clean(x, cfg.degradation), i_obs);
  double val = dot(r, r);
  if (cfg.lambda1 != 0.0) val += cfg.lambda1 * tv_value(x);
  if (cfg.lambda2 != 0.0) {
    val += cfg.lambda2 * (cfg.penalty == Penalty::Nuclear
                              ? tensor_nuclear(x, cfg.alpha)
                              : tensor_mcp(x, cfg.alpha, cfg.mcp));
  }
  return val;
}

double subproblem1_objective(const Cube& x, const SolverState& state,
                             const Cube& i_obs, const SolverConfig& cfg) {
  const Cube r = sub(degrade_clean(x, cfg.degradation), i_obs);
  double val = dot(r, r);
  if (cfg.lambda1 != 0.0) val += cfg.lambda1 * tv_smoothed_value(x, cfg.tv);
  for (int i = 0; i < 3; ++i) {
    Cube d = sub(state.m[i], x);
    axpy(1.0 / state.rho, state.y[i], d);
    val += 0.5 * state.rho * dot(d, d);
  }
  return val;
}

Cube subproblem1_gradient(const Cube& x, const SolverState& state,
                          const Cube& i_obs, const SolverConfig& cfg) {
  const Cube r = sub(degrade_clean(x, cfg.degradation), i_obs);
  Cube g = scale(adjoint_degrade(r, cfg.degradation, x.shape()), 2.0);
  if (cfg.lambda1 != 0.0) axpy(cfg.lambda1, tv_smoothed_grad(x, cfg.tv), g);
  for (int i = 0; i < 3; ++i) {
    axpy(state.rho, x, g);
    axpy(-state.rho, state.m[i], g);
    axpy(-1.0, state.y[i], g);
  }
  return g;
}

Cube update_x(const SolverState& state, const Cube& i_obs,
              const SolverConfig& cfg, UpdateXReport* report) {
  Cube x = state.x;
  double f = subproblem1_objective(x, state, i_obs, cfg);
  const double f_start = f;
  int accepted = 0;
  for (int step = 0; step < cfg.max_inner; ++step) {
    const Cube g = subproblem1_gradient(x, state, i_obs, cfg);
    const double gn2 = dot(g, g);
    if (gn2 == 0.0) break;
    double t = 1.0;
    bool moved = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      Cube cand = x;
      axpy(-t, g, cand);
      const double fc = subproblem1_objective(cand, state, i_obs, cfg);
      if (fc <= f - kArmijoSlope * t * gn2) {
        x = std::move(cand);
        f = fc;
        moved = true;
        ++accepted;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  if (report) {
    report->objective_before = f_start;
    report->objective_after = f;
    report->steps = accepted;
  }
  return x;
}

std::array<Cube, 3> update_m(const SolverState& state, const SolverConfig& cfg) {
  std::array<Cube, 3> m;
  for (int i = 0; i < 3; ++i) {
    Cube a = state.x;
    axpy(-1.0 / state.rho, state.y[i], a);
    const double tau = cfg.lambda2 * cfg.alpha.alpha[i] / state.rho;
    if (tau == 0.0) {
      m[i] = std::move(a);
      continue;
    }
    const UnfoldedMatrix au = unfold(a, i + 1);
    Eigen::MatrixXd shrunk;
    if (cfg.penalty == Penalty::Nuclear) {
      shrunk = svt(au.values, tau);
    } else {
      const Eigen::VectorXd sx = singular_values(unfold(state.x, i + 1).values);
      shrunk = weighted_svt(au.values, tau, mcp_weights(sx, cfg.mcp));
    }
    m[i] = fold(shrunk, i + 1, state.x.shape());
  }
  return m;
}

std::array<Cube, 3> update_y(const SolverState& state, const SolverConfig& cfg) {
  (void)cfg;
  std::array<Cube, 3> y;
  for (int i = 0; i < 3; ++i) {
    y[i] = state.y[i];
    axpy(state.rho, state.m[i], y[i]);
    axpy(-state.rho, state.x, y[i]);
  }
  return y;
}

SolveResult solve(const Cube& i_obs, const SolverConfig& cfg) {
  cfg.validate();
  if (i_obs.size() == 0) throw ShapeError("solve: empty observation");
  const int r = cfg.degradation.factor;
  const Shape hr{i_obs.height() * r, i_obs.width() * r, i_obs.bands()};

  SolverState st;
  st.x = cfg.init == InitScheme::Bicubic
             ? bicubic_upsample(i_obs, r)
             : zero_upsample(i_obs, r, hr.h, hr.w);
  st.m = {st.x, st.x, st.x};
  st.y = {Cube(hr), Cube(hr), Cube(hr)};
  st.rho = cfg.rho;

  SolveResult out;
  out.max_inner_increase = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= cfg.max_outer; ++k) {
    UpdateXReport rep;
    Cube xn = update_x(st, i_obs, cfg, &rep);
    out.max_inner_increase =
        std::max(out.max_inner_increase, rep.objective_after - rep.objective_before);

    const double xnorm = frobenius_norm(st.x);
    const double dx = frobenius_norm(sub(xn, st.x)) / std::max(1.0, xnorm);
    st.x = std::move(xn);
    st.m = update_m(st, cfg);
    st.y = update_y(st, cfg);

    double pres = 0.0;
    for (int i = 0; i < 3; ++i) {
      pres = std::max(pres, frobenius_norm(sub(st.m[i], st.x)));
    }
    st.iter = k;
    st.trace.push_back({k, objective(st.x, i_obs, cfg), pres, dx, st.rho});
    st.rho = std::min(st.rho * cfg.rho_growth, kRhoCap);
    if (dx < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(st.x);
  out.trace = std::move(st.trace);
  return out;
}

std::string format_trace_line(const IterationRecord& rec) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "iter=%d obj=%.17g pres=%.17g dx=%.17g rho=%.17g",
                rec.iter, rec.objective, rec.primal_residual, rec.rel_change,
                rec.rho);
  return std::string(buf);
}

}  // namespace hssr
