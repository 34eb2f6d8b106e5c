// Command-line driver for the experiments.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nlprobe/config.hpp"
#include "nlprobe/errors.hpp"
#include "nlprobe/experiments.hpp"
#include "nlprobe/recovery.hpp"

namespace fs = std::filesystem;
using namespace nlprobe;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

struct GlobalOptions {
  std::string config;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::optional<unsigned long long> seed;
};

int env_int(const char* name) {
  const char* v = std::getenv(name);
  try {
    std::size_t used = 0;
    const int k = std::stoi(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return k;
  } catch (const std::exception&) {
    throw ValidationError(std::string(name) + " must be an integer, got '" + v + "'");
  }
}

// Precedence: command-line flag, then environment, then config file.
ExperimentConfig resolve(const GlobalOptions& g) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
  if (const char* v = std::getenv("NLPROBE_OUT"); v && *v) cfg.output.dir = v;
  if (const char* v = std::getenv("NLPROBE_WORKERS"); v && *v) cfg.workers = env_int("NLPROBE_WORKERS");
  if (g.out) cfg.output.dir = *g.out;
  if (g.workers) cfg.workers = *g.workers;
  if (g.seed) cfg.seed = *g.seed;
  if (cfg.workers < 1) throw ValidationError("workers must be >= 1");
  return cfg;
}

int cmd_simulate(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.output.dir;
  std::optional<fs::path> ckpt;
  if (cfg.numerics.checkpoint) ckpt = dir / "checkpoints";
  const SimulateResult r = run_simulate(cfg, ckpt);
  write_simulate_outputs(dir, cfg, r);
  std::cout << "simulate: " << r.trajectory.size() << " nodes, sup error vs ansatz "
            << r.summary["sup_error_vs_ansatz"].get<double>() << ", mass drift "
            << r.summary["mass_drift_relative"].get<double>() << '\n';
  return code(ExitCode::kSuccess);
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.output.dir;
  const SweepReport r = run_error_sweep(cfg, dir / "runs");
  write_sweep_outputs(dir, cfg, r);
  std::cout << "sweep-error: slope " << r.error_fit.slope << " (predicted " << r.predicted
            << " +- " << r.tolerance << "), R^2 " << r.error_fit.r2 << ", "
            << (r.pass ? "PASS" : "FAIL") << '\n';
  return code(ExitCode::kSuccess);
}

int cmd_contraction(const ExperimentConfig& cfg) {
  const ContractionSummary r = run_contraction_check(cfg);
  write_contraction_outputs(cfg.output.dir, cfg, r);
  bool diverged = false;
  for (const auto& c : r.cases) {
    std::cout << "check-contraction: " << c.label << " at " << c.fraction << " delta0: "
              << (c.rejected ? "rejected" : c.report.converged ? "converged" : "not converged")
              << ", " << (c.pass ? "PASS" : "FAIL") << '\n';
    if (!c.rejected && !c.report.converged) diverged = true;
  }
  return code(diverged ? ExitCode::kNonConvergence : ExitCode::kSuccess);
}

int cmd_recover(const ExperimentConfig& cfg) {
  const RecoverResult r = run_recover(cfg);
  write_recover_outputs(cfg.output.dir, cfg, r);
  std::cout << "recover: sample error " << r.sample_error;
  if (r.integral) std::cout << ", integral " << *r.integral << " (oracle " << *r.integral_truth << ")";
  if (r.fbp_error) std::cout << ", FBP relative L2 error " << *r.fbp_error;
  std::cout << '\n';
  return code(ExitCode::kSuccess);
}

int cmd_xray(const ExperimentConfig& cfg) {
  const Sinogram s = run_xray_forward(cfg);
  write_xray_outputs(cfg.output.dir, cfg, s);
  std::cout << "xray-forward: " << s.rows.size() << " directions written\n";
  return code(ExitCode::kSuccess);
}

int cmd_fbp(ExperimentConfig cfg, const std::string& sinogram) {
  if (!sinogram.empty()) cfg.fbp.sinogram = sinogram;
  if (cfg.fbp.sinogram.empty()) throw ValidationError("fbp: no sinogram given (--sinogram or fbp.sinogram)");
  const Sinogram s = read_sinogram_csv(fs::path(cfg.fbp.sinogram), 2);
  const Grid out = reconstruction_grid(cfg);
  const FbpResult r = fbp_invert(s, out);
  std::optional<double> err;
  if (!cfg.model.beta.is_zero()) err = relative_l2_error(r.clamped, sample(cfg.model.beta, out));
  write_fbp_outputs(cfg.output.dir, cfg, r, err);
  std::cout << "fbp: " << s.rows.size() << " directions, negative fraction " << r.negative_fraction;
  if (err) std::cout << ", relative L2 error vs configured beta " << *err;
  std::cout << '\n';
  return code(ExitCode::kSuccess);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-packet probing of a localized nonlinear coefficient (version " +
               code_version() + ")"};
  app.set_version_flag("--version", code_version());
  GlobalOptions g;
  app.add_option("--config", g.config, "INI or JSON experiment config")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output directory (env NLPROBE_OUT)");
  app.add_option("--workers", g.workers, "worker threads (env NLPROBE_WORKERS)");
  app.add_option("--seed", g.seed, "seed for randomized checks");
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand("simulate", "solve from the ansatz initial data");
  auto* sweep = app.add_subcommand("sweep-error", "eps sweep of sup ||u - v||_FL1 with a power-law fit");
  auto* contraction = app.add_subcommand("check-contraction", "Picard contraction below the delta0 threshold");
  auto* recover = app.add_subcommand("recover", "recover line integrals of beta from the phase");
  auto* xray = app.add_subcommand("xray-forward", "oracle sinogram of the configured beta");
  auto* fbp = app.add_subcommand("fbp", "filtered backprojection of a sinogram CSV");
  std::string sinogram;
  fbp->add_option("--sinogram", sinogram, "sinogram CSV (angle,offset,value,mask)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::kValidation);
  }

  try {
    const ExperimentConfig cfg = resolve(g);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (sweep->parsed()) return cmd_sweep(cfg);
    if (contraction->parsed()) return cmd_contraction(cfg);
    if (recover->parsed()) return cmd_recover(cfg);
    if (xray->parsed()) return cmd_xray(cfg);
    if (fbp->parsed()) return cmd_fbp(cfg, sinogram);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return code(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return code(ExitCode::kValidation);
}
