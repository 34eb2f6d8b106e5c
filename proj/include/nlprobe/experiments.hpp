#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlprobe/config.hpp"
#include "nlprobe/recovery.hpp"
#include "nlprobe/regression.hpp"
#include "nlprobe/solver.hpp"
#include "nlprobe/trajectory.hpp"

namespace nlprobe {

std::string code_version();

/// {"version": ..., "config": <resolved config>} shared by every report.
nlohmann::json report_header(const ExperimentConfig& cfg);

struct SimulateResult {
  Trajectory trajectory;
  nlohmann::json summary;
};

/// Split-step solve from the ansatz initial data at eps = probe.eps. With
/// `checkpoint_dir` set, nodes are checkpointed there (and resumed).
SimulateResult run_simulate(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& checkpoint_dir = {});

struct SweepPoint {
  double eps = 0.0;
  int grid_points = 0;
  double half_length = 0.0;
  double dt = 0.0;
  double sup_error = 0.0;
  double defect = 0.0;
  /// sup_error / defect
  double stability_ratio = 0.0;
  /// Relative error of the line integral recovered from u(T) (1D only, else NaN).
  double recovery_error = 0.0;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  PowerLawFit error_fit;
  PowerLawFit defect_fit;
  double predicted = 0.0;
  double tolerance = 0.3;
  double min_r2 = 0.98;
  bool pass = false;
  /// max / min of stability_ratio over the ladder.
  double stability_spread = 0.0;
};

/// min(p + 2, 3p - 2n)
double predicted_error_exponent(double p, int n);

/// One split-step solve and one ansatz trajectory per eps (concurrently over
/// cfg.workers), compared node by node on node_intervals + 1 nodes.
SweepReport run_error_sweep(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& run_dir = {});

struct ContractionCase {
  std::string label;
  double fraction = 0.0;
  bool rejected = false;
  std::string message;
  PicardReport report;
  bool ratios_below_one = false;
  bool pass = false;
};

struct ContractionSummary {
  double delta0 = 0.0;
  std::vector<ContractionCase> cases;
  bool pass = false;
};

/// Picard solves at fraction * delta0 for each configured fraction, the zero
/// datum, seeded random low-mode data at the first fraction, and one datum
/// at reject_fraction * delta0 that must be refused by the threshold check.
ContractionSummary run_contraction_check(const ExperimentConfig& cfg);

struct RecoverResult {
  Sinogram sinogram;
  Sinogram oracle;
  /// max over masked samples of |recovered - oracle| / max |oracle|.
  double sample_error = 0.0;
  std::optional<double> integral;
  std::optional<double> integral_truth;
  std::optional<double> integral_error;
  std::optional<FbpResult> fbp;
  std::optional<double> fbp_error;
};

RecoverResult run_recover(const ExperimentConfig& cfg);

/// Oracle sinogram: 1D gives the two rows xi = +-1 at x = -T xi; 2D gives
/// probe.directions rows of numerics.offsets samples over [-T, T).
Sinogram run_xray_forward(const ExperimentConfig& cfg);

/// FBP of a sinogram onto the (fbp_N, T) box.
Grid reconstruction_grid(const ExperimentConfig& cfg);

// Report writers: files go into `dir`, named after the subcommand.
void write_simulate_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                            const SimulateResult& r);
void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                         const SweepReport& r);
void write_contraction_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                               const ContractionSummary& r);
void write_recover_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                           const RecoverResult& r);
void write_xray_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                        const Sinogram& s);
void write_fbp_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                       const FbpResult& r, const std::optional<double>& error);

nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const ContractionSummary& r);
nlohmann::json to_json(const RecoverResult& r);

}  // namespace nlprobe
