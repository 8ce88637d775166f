// Command-line front end: synth, degrade, solve, metrics, baseline,
// export-band. Exit codes: 0 success (solve: converged), 2 solve stopped on
// the iteration cap, 1 usage or I/O error.

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hssr/cube.hpp"
#include "hssr/cube_io.hpp"
#include "hssr/degradation.hpp"
#include "hssr/lowrank.hpp"
#include "hssr/metrics.hpp"
#include "hssr/solver.hpp"

namespace {

using nlohmann::json;

std::array<int, 3> parse_triple(const std::string& text, const char* what) {
  std::array<int, 3> out{};
  char extra = 0;
  if (std::sscanf(text.c_str(), "%dx%dx%d%c", &out[0], &out[1], &out[2],
                  &extra) != 3 ||
      out[0] <= 0 || out[1] <= 0 || out[2] <= 0) {
    throw CLI::ValidationError(std::string(what) +
                               " must look like AxBxC with positive integers");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

int numerical_rank(const Eigen::VectorXd& s) {
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > s(0) * 1e-9) ++r;
  }
  return r;
}

json degradation_json(const hssr::DegradationConfig& d) {
  return json{{"kernel_size", d.kernel.size},
              {"kernel_sigma", d.kernel.sigma},
              {"factor", d.factor},
              {"noise_sigma", d.noise_sigma},
              {"seed", d.seed}};
}

json solver_json(const hssr::SolverConfig& c) {
  return json{
      {"lambda1", c.lambda1},
      {"lambda2", c.lambda2},
      {"rho", c.rho},
      {"rho_growth", c.rho_growth},
      {"alpha", c.alpha.alpha},
      {"penalty", c.penalty == hssr::Penalty::Nuclear ? "nuclear" : "mcp"},
      {"mcp", {{"lambda", c.mcp.lambda}, {"a", c.mcp.a}}},
      {"tv", {{"epsilon", c.tv.epsilon}}},
      {"max_outer", c.max_outer},
      {"max_inner", c.max_inner},
      {"tol", c.tol},
      {"degradation", degradation_json(c.degradation)},
      {"init", c.init == hssr::InitScheme::Bicubic ? "bicubic" : "zero"}};
}

json record_json(const hssr::IterationRecord& r) {
  return json{{"iter", r.iter},
              {"objective", r.objective},
              {"primal_residual", r.primal_residual},
              {"rel_change", r.rel_change},
              {"rho", r.rho}};
}

json metrics_json(const hssr::MetricsReport& m) {
  return json{{"psnr", m.psnr},
              {"sam", m.sam},
              {"ergas", m.ergas},
              {"mse", m.mse},
              {"sam_skipped", m.sam_skipped}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw hssr::FormatError("cannot open " + path);
  out << content;
  if (!out) throw hssr::FormatError("short write to " + path);
}

void print_metrics(const hssr::MetricsReport& m) {
  std::cout << "psnr=" << fmt(m.psnr) << "\n"
            << "sam=" << fmt(m.sam) << "\n"
            << "ergas=" << fmt(m.ergas) << "\n"
            << "mse=" << fmt(m.mse) << "\n"
            << "sam_skipped=" << m.sam_skipped << "\n";
}

struct SolveFlags {
  std::string input, output, trace, manifest, ref, config;
  std::vector<double> alpha;
  std::string penalty = "nuclear";
  std::string init = "bicubic";
  int kernel_size = 7;
  double kernel_sigma = 2.0;
};

// Precedence: built-in defaults, then config-file values, then flags the
// user actually passed.
hssr::SolverConfig merge_solver_config(CLI::App* cmd, const SolveFlags& fl,
                                       hssr::SolverConfig cfg) {
  json j;
  if (!fl.config.empty()) {
    std::ifstream in(fl.config);
    if (!in) throw hssr::FormatError("cannot open " + fl.config);
    j = json::parse(in);
  }
  auto keep = [&](const char* flag) { return cmd->count(flag) > 0; };
  auto pick = [&](const char* flag, const char* key, auto& field) {
    if (!keep(flag) && j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  pick("--lambda1", "lambda1", cfg.lambda1);
  pick("--lambda2", "lambda2", cfg.lambda2);
  pick("--rho", "rho", cfg.rho);
  pick("--rho-growth", "rho_growth", cfg.rho_growth);
  pick("--max-outer", "max_outer", cfg.max_outer);
  pick("--max-inner", "max_inner", cfg.max_inner);
  pick("--tol", "tol", cfg.tol);

  if (keep("--alpha")) {
    if (fl.alpha.size() != 3) {
      throw CLI::ValidationError("--alpha needs three comma-separated values");
    }
    cfg.alpha.alpha = {fl.alpha[0], fl.alpha[1], fl.alpha[2]};
  } else if (j.contains("alpha")) {
    cfg.alpha.alpha = j.at("alpha").get<std::array<double, 3>>();
  }

  std::string penalty = fl.penalty;
  if (!keep("--penalty") && j.contains("penalty")) penalty = j.at("penalty");
  cfg.penalty = penalty == "mcp" ? hssr::Penalty::Mcp : hssr::Penalty::Nuclear;

  std::string init = fl.init;
  if (!keep("--init") && j.contains("init")) init = j.at("init");
  cfg.init = init == "zero" ? hssr::InitScheme::ZeroUpsample
                            : hssr::InitScheme::Bicubic;

  if (j.contains("mcp")) {
    const json& m = j.at("mcp");
    if (!keep("--mcp-lambda") && m.contains("lambda")) cfg.mcp.lambda = m.at("lambda");
    if (!keep("--mcp-a") && m.contains("a")) cfg.mcp.a = m.at("a");
  }
  if (j.contains("tv") && !keep("--tv-epsilon") && j.at("tv").contains("epsilon")) {
    cfg.tv.epsilon = j.at("tv").at("epsilon");
  }

  int ksize = fl.kernel_size;
  double ksigma = fl.kernel_sigma;
  if (j.contains("degradation")) {
    const json& d = j.at("degradation");
    if (!keep("--kernel-size") && d.contains("kernel_size")) ksize = d.at("kernel_size");
    if (!keep("--kernel-sigma") && d.contains("kernel_sigma")) ksigma = d.at("kernel_sigma");
    if (!keep("--factor") && d.contains("factor")) cfg.degradation.factor = d.at("factor");
    if (!keep("--noise") && d.contains("noise_sigma")) cfg.degradation.noise_sigma = d.at("noise_sigma");
    if (!keep("--seed") && d.contains("seed")) cfg.degradation.seed = d.at("seed");
  }
  cfg.degradation.kernel = hssr::gaussian_kernel(ksize, ksigma);
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Hyperspectral cube super-resolution toolkit"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic ground-truth cube");
  std::string synth_dims = "32x32x8", synth_rank = "4x4x2", synth_out,
              synth_manifest;
  hssr::SynthConfig synth_cfg;
  bool no_normalize = false;
  synth->add_option("--dims", synth_dims, "HxWxB");
  synth->add_option("--rank", synth_rank, "per-mode ranks R1xR2xR3");
  synth->add_option("--smoothness", synth_cfg.smoothness, "factor averaging passes");
  synth->add_option("--seed", synth_cfg.seed);
  synth->add_flag("--no-normalize", no_normalize, "keep raw value range");
  synth->add_option("-o,--output", synth_out)->required();
  synth->add_option("--manifest", synth_manifest, "write a JSON run manifest");

  auto* degrade = app.add_subcommand("degrade", "Blur, decimate, and add noise");
  std::string deg_in, deg_out, deg_manifest;
  hssr::DegradationConfig deg_cfg;
  int deg_ksize = 7;
  double deg_ksigma = 2.0;
  degrade->add_option("-i,--input", deg_in)->required();
  degrade->add_option("-o,--output", deg_out)->required();
  degrade->add_option("--factor", deg_cfg.factor);
  degrade->add_option("--kernel-size", deg_ksize);
  degrade->add_option("--kernel-sigma", deg_ksigma);
  degrade->add_option("--noise", deg_cfg.noise_sigma, "Gaussian noise sigma");
  degrade->add_option("--seed", deg_cfg.seed);
  degrade->add_option("--manifest", deg_manifest, "write a JSON run manifest");

  auto* solve = app.add_subcommand("solve", "Super-resolve a low-resolution cube");
  SolveFlags fl;
  hssr::SolverConfig scfg;
  solve->add_option("-i,--input", fl.input)->required();
  solve->add_option("-o,--output", fl.output)->required();
  solve->add_option("--trace", fl.trace, "write the per-iteration trace");
  solve->add_option("--manifest", fl.manifest, "write a JSON run manifest");
  solve->add_option("--ref", fl.ref, "ground truth for metrics in the manifest");
  solve->add_option("--config", fl.config, "JSON config file (flags win)");
  solve->add_option("--lambda1", scfg.lambda1, "TV weight");
  solve->add_option("--lambda2", scfg.lambda2, "low-rank weight");
  solve->add_option("--rho", scfg.rho);
  solve->add_option("--rho-growth", scfg.rho_growth);
  solve->add_option("--alpha", fl.alpha, "three mode weights")->delimiter(',');
  solve->add_option("--penalty", fl.penalty)
      ->check(CLI::IsMember({"nuclear", "mcp"}));
  solve->add_option("--mcp-lambda", scfg.mcp.lambda);
  solve->add_option("--mcp-a", scfg.mcp.a);
  solve->add_option("--tv-epsilon", scfg.tv.epsilon);
  solve->add_option("--max-outer", scfg.max_outer);
  solve->add_option("--max-inner", scfg.max_inner);
  solve->add_option("--tol", scfg.tol);
  solve->add_option("--factor", scfg.degradation.factor);
  solve->add_option("--kernel-size", fl.kernel_size);
  solve->add_option("--kernel-sigma", fl.kernel_sigma);
  solve->add_option("--noise", scfg.degradation.noise_sigma);
  solve->add_option("--seed", scfg.degradation.seed);
  solve->add_option("--init", fl.init)->check(CLI::IsMember({"bicubic", "zero"}));

  auto* metrics = app.add_subcommand("metrics", "Score an estimate against a reference");
  std::string met_ref, met_est, met_json;
  int met_ratio = 1;
  metrics->add_option("--ref", met_ref)->required();
  metrics->add_option("--est", met_est)->required();
  metrics->add_option("--ratio", met_ratio, "resolution ratio for ERGAS");
  metrics->add_option("--json", met_json, "also write the report as JSON");

  auto* baseline = app.add_subcommand("baseline", "Bicubic upsampling baseline");
  std::string base_in, base_out;
  int base_factor = 2;
  baseline->add_option("-i,--input", base_in)->required();
  baseline->add_option("-o,--output", base_out)->required();
  baseline->add_option("--factor", base_factor);

  auto* exportb = app.add_subcommand("export-band", "Write one band as a PGM image");
  std::string exp_in, exp_out;
  int exp_band = 0;
  exportb->add_option("-i,--input", exp_in)->required();
  exportb->add_option("-o,--output", exp_out)->required();
  exportb->add_option("--band", exp_band);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  if (*synth) {
    const auto d = parse_triple(synth_dims, "--dims");
    synth_cfg.dims = {d[0], d[1], d[2]};
    synth_cfg.rank = parse_triple(synth_rank, "--rank");
    synth_cfg.normalize = !no_normalize;
    const hssr::Cube gt = hssr::synth_cube(synth_cfg);
    hssr::write_cube(gt, synth_out);
    std::cout << "dims=" << gt.height() << "x" << gt.width() << "x"
              << gt.bands() << "\n";
    for (int m = 1; m <= 3; ++m) {
      std::cout << "numerical_rank_mode" << m << "="
                << numerical_rank(
                       hssr::singular_values(hssr::unfold(gt, m).values))
                << "\n";
    }
    if (!synth_manifest.empty()) {
      json man{{"command", "synth"},
               {"outputs", {{"cube", synth_out}}},
               {"config",
                {{"dims", synth_dims},
                 {"rank", synth_cfg.rank},
                 {"smoothness", synth_cfg.smoothness},
                 {"seed", synth_cfg.seed},
                 {"normalize", synth_cfg.normalize}}},
               {"duration_seconds", elapsed()}};
      write_text(synth_manifest, man.dump(2) + "\n");
    }
    return 0;
  }

  if (*degrade) {
    deg_cfg.kernel = hssr::gaussian_kernel(deg_ksize, deg_ksigma);
    const hssr::Cube hr = hssr::read_cube(deg_in);
    const hssr::Cube lr = hssr::degrade(hr, deg_cfg);
    hssr::write_cube(lr, deg_out);
    std::cout << "dims=" << lr.height() << "x" << lr.width() << "x"
              << lr.bands() << "\n";
    if (!deg_manifest.empty()) {
      json man{{"command", "degrade"},
               {"inputs", {{"cube", deg_in}}},
               {"outputs", {{"cube", deg_out}}},
               {"config", degradation_json(deg_cfg)},
               {"duration_seconds", elapsed()}};
      write_text(deg_manifest, man.dump(2) + "\n");
    }
    return 0;
  }

  if (*solve) {
    const hssr::SolverConfig cfg = merge_solver_config(solve, fl, scfg);
    cfg.validate();
    const hssr::Cube lr = hssr::read_cube(fl.input);
    const hssr::SolveResult res = hssr::solve(lr, cfg);
    hssr::write_cube(res.x, fl.output);
    for (const auto& rec : res.trace) {
      std::cout << hssr::format_trace_line(rec) << "\n";
    }
    if (!fl.trace.empty()) {
      std::string text;
      for (const auto& rec : res.trace) {
        text += hssr::format_trace_line(rec);
        text += "\n";
      }
      write_text(fl.trace, text);
    }
    json man{{"command", "solve"},
             {"inputs", {{"cube", fl.input}}},
             {"outputs", {{"cube", fl.output}}},
             {"config", solver_json(cfg)},
             {"iterations", res.trace.size()},
             {"converged", res.converged},
             {"duration_seconds", elapsed()}};
    if (!res.trace.empty()) man["final"] = record_json(res.trace.back());
    if (!fl.trace.empty()) man["outputs"]["trace"] = fl.trace;
    if (!fl.ref.empty()) {
      const hssr::Cube ref = hssr::read_cube(fl.ref);
      man["inputs"]["ref"] = fl.ref;
      man["metrics"] = metrics_json(
          hssr::compute_metrics(ref, res.x, cfg.degradation.factor));
    }
    if (!fl.manifest.empty()) write_text(fl.manifest, man.dump(2) + "\n");
    return res.converged ? 0 : 2;
  }

  if (*metrics) {
    const hssr::Cube ref = hssr::read_cube(met_ref);
    const hssr::Cube est = hssr::read_cube(met_est);
    const hssr::MetricsReport rep = hssr::compute_metrics(ref, est, met_ratio);
    print_metrics(rep);
    if (!met_json.empty()) write_text(met_json, metrics_json(rep).dump(2) + "\n");
    return 0;
  }

  if (*baseline) {
    const hssr::Cube lr = hssr::read_cube(base_in);
    const hssr::Cube hr = hssr::bicubic_upsample(lr, base_factor);
    hssr::write_cube(hr, base_out);
    std::cout << "dims=" << hr.height() << "x" << hr.width() << "x"
              << hr.bands() << "\n";
    return 0;
  }

  if (*exportb) {
    const hssr::Cube x = hssr::read_cube(exp_in);
    hssr::export_band(x, exp_band, exp_out);
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
