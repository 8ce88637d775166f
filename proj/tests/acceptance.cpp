// Acceptance gate: nine independent checks, one pass/fail line each.
// Exit status is the number of failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hssr/cube.hpp"
#include "hssr/cube_io.hpp"
#include "hssr/degradation.hpp"
#include "hssr/lowrank.hpp"
#include "hssr/metrics.hpp"
#include "hssr/rng.hpp"
#include "hssr/solver.hpp"
#include "hssr/tv.hpp"
#include "test_util.hpp"

namespace {

using hssr::Cube;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: svt and weighted_svt are proximal minimizers.

bool check_prox_oracle(std::string& note) {
  const auto t0 = std::chrono::steady_clock::now();
  const double tau = 0.5;
  const hssr::McpParams mcp;
  int bad = 0;
  hssr::GaussianStream pg(4242);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd a = testutil::random_matrix(6, 6, 1000 + trial);
    const double scale = std::max(1.0, a.norm());

    const Eigen::MatrixXd zs = hssr::svt(a, tau);
    const double fs = tau * hssr::nuclear_norm(zs) + 0.5 * (zs - a).squaredNorm();

    const Eigen::VectorXd w = hssr::mcp_weights(hssr::singular_values(a), mcp);
    const Eigen::MatrixXd zw = hssr::weighted_svt(a, tau, w);
    auto weighted_obj = [&](const Eigen::MatrixXd& z) {
      const Eigen::VectorXd s = hssr::singular_values(z);
      double val = 0.5 * (z - a).squaredNorm();
      for (Eigen::Index j = 0; j < s.size(); ++j) val += tau * w(j) * s(j);
      return val;
    };
    const double fw = weighted_obj(zw);

    for (int p = 0; p < 1000; ++p) {
      Eigen::MatrixXd pert(6, 6);
      for (int n = 0; n < 36; ++n) pert.data()[n] = pg.normal();
      pert *= std::pow(10.0, -4.0 + 3.0 * pg.uniform()) * scale / pert.norm();
      const Eigen::MatrixXd cand_s = zs + pert;
      if (!(tau * hssr::nuclear_norm(cand_s) +
                0.5 * (cand_s - a).squaredNorm() >
            fs)) {
        ++bad;
      }
      if (!(weighted_obj(zw + pert) > fw)) ++bad;
    }
  }
  const double elapsed = seconds_since(t0);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d failures, %.1f s", bad, elapsed);
  note = buf;
  return bad == 0 && elapsed < 10.0;
}

// ---------------------------------------------------------------------------
// Criterion 2: downsampling operator and its adjoint agree in inner products.

bool check_adjoint(std::string& note) {
  double worst = 0.0;
  int instances = 0;
  for (int factor : {1, 2, 4}) {
    for (int ksize : {1, 3, 7}) {
      for (int rep = 0; rep < 6; ++rep) {
        hssr::DegradationConfig cfg;
        cfg.kernel = hssr::gaussian_kernel(ksize, 1.5);
        cfg.factor = factor;
        const std::uint64_t seed = 9000 + 100 * factor + 10 * ksize + rep;
        const Cube x = testutil::random_cube({16, 16, 3}, seed);
        const Cube y =
            testutil::random_cube({16 / factor, 16 / factor, 3}, seed + 1);
        const double lhs = hssr::dot(hssr::degrade_clean(x, cfg), y);
        const double rhs =
            hssr::dot(x, hssr::adjoint_degrade(y, cfg, x.shape()));
        const double rel =
            std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
        worst = std::max(worst, rel);
        ++instances;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d instances, worst rel err %.3g", instances,
                worst);
  note = buf;
  return instances >= 50 && worst <= 1e-10;
}

// ---------------------------------------------------------------------------
// Criterion 3: smoothed TV gradient vs central finite differences.

bool check_tv_gradient(std::string& note) {
  hssr::TvConfig tv;
  tv.epsilon = 1e-2;
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Cube x = testutil::random_cube({6, 5, 4}, 500 + trial);
    const Cube g = hssr::tv_smoothed_grad(x, tv);
    Cube fd(x.shape());
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double saved = x.data()[n];
      x.data()[n] = saved + h;
      const double fp = hssr::tv_smoothed_value(x, tv);
      x.data()[n] = saved - h;
      const double fm = hssr::tv_smoothed_value(x, tv);
      x.data()[n] = saved;
      fd.data()[n] = (fp - fm) / (2.0 * h);
    }
    const double rel = hssr::frobenius_norm(hssr::sub(g, fd)) /
                       std::max(hssr::frobenius_norm(g), 1e-30);
    worst = std::max(worst, rel);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst rel err %.3g", worst);
  note = buf;
  return worst <= 1e-5;
}

// ---------------------------------------------------------------------------
// Criterion 4: fold/unfold round-trip; spectral penalties under rotations.

bool check_fold_and_invariance(std::string& note) {
  hssr::GaussianStream dims(31337);
  for (int trial = 0; trial < 100; ++trial) {
    auto draw = [&] { return 1 + int(dims.uniform() * 6.0); };
    const hssr::Shape s{draw(), draw(), draw()};
    const Cube x = testutil::random_cube(s, 2000 + trial);
    for (int mode = 1; mode <= 3; ++mode) {
      if (hssr::fold(hssr::unfold(x, mode).values, mode, s) != x) {
        note = "round-trip mismatch";
        return false;
      }
    }
  }

  const hssr::McpParams mcp;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = testutil::random_matrix(8, 6, 3000 + trial);
    const Eigen::MatrixXd q = testutil::random_orthogonal(8, 3100 + trial);
    const Eigen::MatrixXd v = testutil::random_orthogonal(6, 3200 + trial);
    const Eigen::MatrixXd rotated = q * a * v.transpose();
    worst = std::max(worst, std::abs(hssr::nuclear_norm(rotated) -
                                     hssr::nuclear_norm(a)));
    worst = std::max(worst, std::abs(hssr::mcp_matrix_value(rotated, mcp) -
                                     hssr::mcp_matrix_value(a, mcp)));
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "worst invariance gap %.3g", worst);
  note = buf;
  return worst <= 1e-9;
}

// ---------------------------------------------------------------------------
// Criterion 5: identity instance is recovered to 1e-6.

bool check_identity_recovery(std::string& note) {
  hssr::SynthConfig synth;
  synth.dims = {24, 24, 6};
  synth.rank = {3, 3, 2};
  synth.seed = 3;
  const Cube gt = hssr::synth_cube(synth);

  hssr::SolverConfig cfg;
  cfg.lambda1 = 0.0;
  cfg.lambda2 = 0.0;
  cfg.degradation.kernel = hssr::gaussian_kernel(1, 1.0);
  cfg.degradation.factor = 1;
  cfg.max_outer = 50;
  const hssr::SolveResult res = hssr::solve(gt, cfg);
  const double rel = hssr::frobenius_norm(hssr::sub(res.x, gt)) /
                     hssr::frobenius_norm(gt);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "rel err %.3g in %zu iterations", rel,
                res.trace.size());
  note = buf;
  return rel <= 1e-6 && res.trace.size() <= 50;
}

// ---------------------------------------------------------------------------
// Criteria 6-8 share one sweep over the standard synthetic instance.

struct SweepRun {
  hssr::Penalty penalty;
  double lambda1, lambda2;
  hssr::SolveResult result;
  double psnr, sam;
};

struct SweepOutcome {
  Cube gt, lr;
  std::vector<SweepRun> runs;
  double psnr_bic, sam_bic;
  double elapsed;
  int best_nuclear = -1, best_mcp = -1;
};

hssr::SolverConfig sweep_config(double l1, double l2, hssr::Penalty pen) {
  hssr::SolverConfig cfg;
  cfg.lambda1 = l1;
  cfg.lambda2 = l2;
  cfg.penalty = pen;
  cfg.degradation.kernel = hssr::gaussian_kernel(7, 2.0);
  cfg.degradation.factor = 2;
  return cfg;
}

SweepOutcome run_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  SweepOutcome out;
  hssr::SynthConfig synth;
  synth.dims = {32, 32, 8};
  synth.rank = {4, 4, 2};
  synth.smoothness = 2.0;
  synth.seed = 7;
  out.gt = hssr::synth_cube(synth);

  hssr::DegradationConfig deg;
  deg.kernel = hssr::gaussian_kernel(7, 2.0);
  deg.factor = 2;
  out.lr = hssr::degrade(out.gt, deg);

  const Cube bic = hssr::bicubic_upsample(out.lr, 2);
  out.psnr_bic = hssr::psnr(out.gt, bic);
  out.sam_bic = hssr::sam(out.gt, bic);

  for (hssr::Penalty pen : {hssr::Penalty::Nuclear, hssr::Penalty::Mcp}) {
    for (double l1 : {1e-4, 1e-3, 1e-2}) {
      for (double l2 : {1e-3, 1e-2, 1e-1}) {
        SweepRun run;
        run.penalty = pen;
        run.lambda1 = l1;
        run.lambda2 = l2;
        run.result = hssr::solve(out.lr, sweep_config(l1, l2, pen));
        run.psnr = hssr::psnr(out.gt, run.result.x);
        run.sam = hssr::sam(out.gt, run.result.x);
        const int idx = int(out.runs.size());
        int& best = pen == hssr::Penalty::Nuclear ? out.best_nuclear : out.best_mcp;
        if (best < 0 || run.psnr > out.runs[best].psnr) best = idx;
        out.runs.push_back(std::move(run));
      }
    }
  }
  out.elapsed = seconds_since(t0);
  return out;
}

bool check_ordering(const SweepOutcome& sw, std::string& note) {
  const SweepRun& nuc = sw.runs[sw.best_nuclear];
  const SweepRun& mcp = sw.runs[sw.best_mcp];
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "psnr bic %.2f nuc %.2f mcp %.2f, sam bic %.4f nuc %.4f mcp "
                "%.4f, %.0f s",
                sw.psnr_bic, nuc.psnr, mcp.psnr, sw.sam_bic, nuc.sam, mcp.sam,
                sw.elapsed);
  note = buf;
  const bool psnr_ok = mcp.psnr >= nuc.psnr && nuc.psnr >= sw.psnr_bic &&
                       mcp.psnr - sw.psnr_bic >= 0.5;
  const bool sam_ok = mcp.sam <= nuc.sam + 0.005 && nuc.sam <= sw.sam_bic + 0.005 &&
                      mcp.sam <= sw.sam_bic;
  return psnr_ok && sam_ok && sw.elapsed < 300.0;
}

bool check_monotone(const SweepOutcome& sw, std::string& note) {
  double worst_increase = -std::numeric_limits<double>::infinity();
  double worst_ratio = 0.0;
  for (int idx : {sw.best_nuclear, sw.best_mcp}) {
    const SweepRun& run = sw.runs[idx];
    worst_increase = std::max(worst_increase, run.result.max_inner_increase);
    const auto& tr = run.result.trace;
    worst_ratio = std::max(
        worst_ratio, tr.back().primal_residual / tr.front().primal_residual);
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max inner increase %.3g, residual ratio %.3g",
                worst_increase, worst_ratio);
  note = buf;
  return worst_increase <= 0.0 && worst_ratio <= 0.10;
}

bool check_determinism(const SweepOutcome& first, std::string& note) {
  const SweepOutcome second = run_sweep();
  if (second.runs.size() != first.runs.size()) {
    note = "sweep size changed";
    return false;
  }
  for (std::size_t i = 0; i < first.runs.size(); ++i) {
    if (!(first.runs[i].result.x == second.runs[i].result.x)) {
      note = "cube mismatch on rerun";
      return false;
    }
    const auto& ta = first.runs[i].result.trace;
    const auto& tb = second.runs[i].result.trace;
    if (ta.size() != tb.size()) {
      note = "trace length mismatch on rerun";
      return false;
    }
    for (std::size_t k = 0; k < ta.size(); ++k) {
      if (hssr::format_trace_line(ta[k]) != hssr::format_trace_line(tb[k])) {
        note = "trace mismatch on rerun";
        return false;
      }
    }
  }

  testutil::TempDir dir;
  for (int pass = 0; pass < 2; ++pass) {
    const SweepOutcome& sw = pass == 0 ? first : second;
    for (int idx : {sw.best_nuclear, sw.best_mcp}) {
      const SweepRun& run = sw.runs[idx];
      const std::string tag = std::to_string(idx) + "_" + std::to_string(pass);
      hssr::write_cube(run.result.x, dir.file("cube_" + tag + ".hs"));
      std::ofstream tr(dir.file("trace_" + tag + ".txt"), std::ios::binary);
      for (const auto& rec : run.result.trace) {
        tr << hssr::format_trace_line(rec) << "\n";
      }
    }
  }
  for (int idx : {first.best_nuclear, first.best_mcp}) {
    const std::string a = std::to_string(idx) + "_0";
    const std::string b = std::to_string(idx) + "_1";
    if (slurp(dir.file("cube_" + a + ".hs")) !=
        slurp(dir.file("cube_" + b + ".hs"))) {
      note = "cube file bytes differ";
      return false;
    }
    if (slurp(dir.file("trace_" + a + ".txt")) !=
        slurp(dir.file("trace_" + b + ".txt"))) {
      note = "trace file bytes differ";
      return false;
    }
  }
  note = "rerun bitwise identical";
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 9: container format round-trip, PGM endpoints, corrupt headers.

bool check_format(std::string& note) {
  testutil::TempDir dir;

  const Cube x = testutil::random_cube({9, 5, 4}, 42);
  const std::string path = dir.file("rt.hs");
  hssr::write_cube(x, path);
  if (!(hssr::read_cube(path) == x)) {
    note = "round-trip not bitwise";
    return false;
  }
  const std::string bytes1 = slurp(path);
  hssr::write_cube(hssr::read_cube(path), path);
  if (slurp(path) != bytes1) {
    note = "rewrite changed bytes";
    return false;
  }

  Cube band({3, 3, 1});
  for (int n = 0; n < 9; ++n) band.data()[n] = 0.25 * n - 1.0;
  const std::string pgm = dir.file("band.pgm");
  hssr::export_band(band, 0, pgm);
  const std::string pb = slurp(pgm);
  const std::string header = "P5\n3 3\n255\n";
  if (pb.rfind(header, 0) != 0 || pb.size() != header.size() + 9 ||
      (unsigned char)pb[header.size()] != 0 ||
      (unsigned char)pb[pb.size() - 1] != 255) {
    note = "pgm endpoint law broken";
    return false;
  }

  const std::string good = bytes1;
  std::vector<std::string> corrupt;
  corrupt.push_back("HSCUBE99" + good.substr(8));        // wrong magic
  corrupt.push_back(good.substr(0, 10));                 // truncated header
  corrupt.push_back(good.substr(0, 21));                 // missing payload
  {
    std::string z = good;                                // zero height
    z[8] = z[9] = z[10] = z[11] = '\0';
    corrupt.push_back(z);
    std::string d = good;                                // unknown dtype
    d[20] = '\x02';
    corrupt.push_back(d);
    std::string huge = good;                             // absurd dims
    for (int i = 8; i < 20; ++i) huge[i] = '\xff';
    corrupt.push_back(huge);
    corrupt.push_back(good.substr(0, good.size() - 3));  // short payload
  }
  for (std::size_t i = 0; i < corrupt.size(); ++i) {
    const std::string cpath = dir.file("bad" + std::to_string(i) + ".hs");
    std::ofstream(cpath, std::ios::binary) << corrupt[i];
    try {
      hssr::read_cube(cpath);
      note = "corrupt file " + std::to_string(i) + " accepted";
      return false;
    } catch (const hssr::FormatError&) {
    } catch (const std::exception& e) {
      note = "corrupt file " + std::to_string(i) + " wrong error: " + e.what();
      return false;
    }
  }
  try {
    hssr::read_cube(dir.file("absent.hs"));
    note = "missing file accepted";
    return false;
  } catch (const hssr::FormatError&) {
  }
  note = "round-trip, pgm endpoints, 7 corrupt headers rejected";
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  auto criterion = [&](int n, const char* label,
                       const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s%s\n", ok ? "PASS" : "FAIL", n, label,
                detail.empty() ? "" : " (", detail.c_str(),
                detail.empty() ? "" : ")");
    std::fflush(stdout);
    if (!ok) ++failures;
  };

  criterion(1, "spectral prox maps minimize their objectives", check_prox_oracle);
  criterion(2, "degradation adjoint passes the dot-product test", check_adjoint);
  criterion(3, "smoothed TV gradient matches finite differences", check_tv_gradient);
  criterion(4, "fold round-trip and rotation-invariant penalties",
            check_fold_and_invariance);
  criterion(5, "identity instance recovered", check_identity_recovery);

  std::optional<SweepOutcome> sweep;
  try {
    sweep = run_sweep();
  } catch (const std::exception& e) {
    std::printf("sweep failed: %s\n", e.what());
  }
  auto with_sweep = [&](const std::function<bool(const SweepOutcome&, std::string&)>& fn) {
    return [&, fn](std::string& detail) {
      if (!sweep) {
        detail = "sweep unavailable";
        return false;
      }
      return fn(*sweep, detail);
    };
  };
  criterion(6, "penalty orderings beat bicubic on the standard instance",
            with_sweep(check_ordering));
  criterion(7, "inner objective monotone and residual decays",
            with_sweep(check_monotone));
  criterion(8, "sweep rerun is bitwise identical", with_sweep(check_determinism));
  criterion(9, "container and PGM format conformance", check_format);

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
