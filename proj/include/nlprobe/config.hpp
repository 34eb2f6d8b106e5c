#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlprobe/ansatz.hpp"
#include "nlprobe/nonlinearity.hpp"
#include "nlprobe/recovery.hpp"

namespace nlprobe {

struct ModelConfig {
  int dim = 1;
  int n = 1;
  std::vector<double> g_coeffs{1.0};
  double radius = 1.0;
  double horizon = 2.0;
  BumpCoefficient beta = BumpCoefficient::smooth(1.0, 1.0);
};

struct ProbeConfig {
  double p = 1.25;
  double eps = 0.1;
  Point xi{1.0, 0.0};
  /// Number of directions for 2D recovery (angles pi i / count).
  int directions = 64;
  InitialProfile a0{InitialProfile::Kind::kGaussian, 0.5, 1.0, {0.0, 0.0}};
};

struct NumericsConfig {
  /// 0 selects the automatic probe grid.
  int grid_points = 0;
  double half_length = 0.0;
  double nyquist = 8.0;
  /// 0 selects min(1e-2, 0.1 eps^p).
  double dt = 0.0;
  int node_intervals = 128;
  double picard_tol = 1e-8;
  int picard_max_iter = 200;
  int simpson_intervals = 512;
  double threshold = 0.3;
  /// "pde" solves the equation per direction, "exact" samples the ansatz.
  std::string recover_mode = "pde";
  AmplitudeSource amplitude_source = AmplitudeSource::kAnalytic;
  int offsets = 256;
  int fbp_points = 128;
  bool checkpoint = true;
};

struct SweepConfig {
  std::vector<double> eps{0.2, 0.15, 0.1, 0.07};
  /// Empty selects min(p + 2, 3p - 2n).
  std::optional<double> predicted;
  double slope_tolerance = 0.3;
  double min_r2 = 0.98;
};

struct ContractionConfig {
  std::vector<double> fractions{0.5, 0.9};
  double reject_fraction = 10.0;
  int grid_points = 128;
  double half_length = 12.566370614359172;
  double u0_width = 1.0;
  int random_trials = 4;
};

struct FbpConfig {
  std::string sinogram;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "json", "pgm"};
  bool wants(const std::string& f) const;
};

struct ExperimentConfig {
  ModelConfig model;
  ProbeConfig probe;
  NumericsConfig numerics;
  SweepConfig sweep;
  ContractionConfig contraction;
  FbpConfig fbp;
  OutputConfig output;
  int workers = 1;
  unsigned long long seed = 20240101ULL;

  AnalyticNonlinearity nonlinearity() const;
  /// The probe at scale eps (direction from the probe block).
  ProbeParams probe_params(double eps) const;
  ProbeParams probe_params() const { return probe_params(probe.eps); }
  /// Grid for one probe: the automatic rule unless N/L are overridden; an
  /// override smaller than 3T + 8w/eps is rejected.
  Grid grid_for(const ProbeParams& params) const;
  double time_step(const ProbeParams& params) const;
};

/// Parses `key = value` text with [section] headers (';' or '#' comments).
ExperimentConfig parse_ini_config(const std::string& text);
ExperimentConfig parse_json_config(const std::string& text);
/// Chooses the parser from the extension (.json) or the first character.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks every module precondition that does not need a solve: dimensions,
/// p > n, supp beta inside |x| < T, admissibility for every eps used, grid
/// overrides. Throws ValidationError naming the violated hypothesis.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace nlprobe
