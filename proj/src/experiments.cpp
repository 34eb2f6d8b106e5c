#include "nlprobe/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "nlprobe/field_io.hpp"
#include "nlprobe/parallel.hpp"
#include "nlprobe/spectral.hpp"

namespace nlprobe {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_text(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os.precision(17);
  return os;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  auto os = open_text(path);
  os << j.dump(2) << '\n';
}

nlohmann::json nan_to_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

nlohmann::json fit_json(const PowerLawFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"points", f.points}};
}

FlowSpec flow_of(const ExperimentConfig& cfg) { return {cfg.model.n, cfg.model.horizon}; }

struct ProbeRun {
  ProbeParams params;
  Grid grid;
  ComplexField u0;
};

ProbeRun prepare_probe(const ExperimentConfig& cfg, const ProbeParams& params,
                       const BumpCoefficient& beta) {
  const AnalyticNonlinearity g = cfg.nonlinearity();
  params.validate(g, beta);
  Grid grid = cfg.grid_for(params);
  ComplexField u0 = initial_data(params, g, beta, grid);
  return {params, grid, std::move(u0)};
}

// Relative error of one row against the oracle, normalized by the oracle peak.
double row_error(const SinogramRow& got, const SinogramRow& want) {
  double peak = 0.0, worst = 0.0;
  for (double v : want.values) peak = std::max(peak, std::abs(v));
  for (std::size_t j = 0; j < got.size(); ++j) {
    if (got.mask[j]) worst = std::max(worst, std::abs(got.values[j] - want.values[j]));
  }
  if (peak == 0.0) return worst;
  return worst / peak;
}

// One direction of the recovery pipeline in the frame where xi is a lattice
// direction. Returns the row in lab coordinates.
SinogramRow probe_direction_pde(const ExperimentConfig& cfg, const Point& xi) {
  const AnalyticNonlinearity g = cfg.nonlinearity();
  ProbeParams lab = cfg.probe_params();
  lab.xi = xi;
  ProbeParams frame = lab;
  BumpCoefficient beta = cfg.model.beta;
  if (cfg.model.dim == 2) {
    frame.xi = {1.0, 0.0};
    beta = in_direction_frame(cfg.model.beta, xi);
    const Point c = lab.a0.center;
    frame.a0.center = {dot(xi, c), dot(perpendicular(xi), c)};
  }
  ProbeRun run = prepare_probe(cfg, frame, beta);
  SplitStepOptions opts;
  opts.dt = cfg.time_step(frame);
  opts.node_intervals = 1;
  const Trajectory u = splitstep_solve(run.u0, flow_of(cfg), g, beta, opts);
  const ComplexField reference = free_propagate(run.u0, 2.0 * cfg.model.horizon, cfg.model.n);
  const PhaseSamples phase = extract_phase(u.back(), reference, frame, cfg.numerics.threshold);
  SinogramRow row = line_integrals_from_phase(phase, frame, g, run.grid.spacing(),
                                              cfg.numerics.amplitude_source);
  row.direction = xi;
  if (cfg.model.dim == 2) {
    const Point perp = perpendicular(xi);
    for (auto& p : row.points) p = p[0] * xi + p[1] * perp;
  }
  return row;
}

SinogramRow probe_direction_exact(const ExperimentConfig& cfg, const Point& xi) {
  const AnalyticNonlinearity g = cfg.nonlinearity();
  ProbeParams params = cfg.probe_params();
  params.xi = xi;
  params.validate(g, cfg.model.beta);
  const double T = cfg.model.horizon;
  std::vector<Point> pts;
  if (cfg.model.dim == 1) {
    pts.push_back(-T * xi);
  } else {
    const double ds = 2.0 * T / cfg.numerics.offsets;
    for (int j = 0; j < cfg.numerics.offsets; ++j) {
      pts.push_back(-T * xi + (-T + j * ds) * perpendicular(xi));
    }
  }
  std::vector<cplx> values;
  values.reserve(pts.size());
  for (const auto& x : pts) values.push_back(approx_solution_v_at(params, g, cfg.model.beta, T, x));
  const PhaseSamples phase = extract_phase(pts, values, params, cfg.numerics.threshold);
  return line_integrals_from_phase(phase, params, g, 0.0, cfg.numerics.amplitude_source);
}

std::vector<Point> recovery_directions(const ExperimentConfig& cfg) {
  if (cfg.model.dim == 1) return {cfg.probe.xi, -1.0 * cfg.probe.xi};
  std::vector<Point> dirs;
  for (int i = 0; i < cfg.probe.directions; ++i) {
    dirs.push_back(unit_direction(std::numbers::pi * i / cfg.probe.directions));
  }
  return dirs;
}

}  // namespace

std::string code_version() { return NLPROBE_VERSION; }

nlohmann::json report_header(const ExperimentConfig& cfg) {
  return {{"version", code_version()}, {"config", to_json(cfg)}};
}

// --- simulate ----------------------------------------------------------------

SimulateResult run_simulate(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& checkpoint_dir) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  const AnalyticNonlinearity g = cfg.nonlinearity();
  const ProbeRun run = prepare_probe(cfg, cfg.probe_params(), cfg.model.beta);
  SplitStepOptions opts;
  opts.dt = cfg.time_step(run.params);
  opts.node_intervals = cfg.numerics.node_intervals;
  opts.checkpoint_dir = checkpoint_dir;
  Trajectory u = splitstep_solve(run.u0, flow_of(cfg), g, cfg.model.beta, opts);

  const Trajectory v =
      ansatz_trajectory(run.params, g, cfg.model.beta, run.grid, u.times, cfg.workers);
  const SolutionComparison cmp = compare_solutions(u, v);

  const double m0 = mass(run.u0);
  double drift = 0.0;
  for (const auto& f : u.fields) drift = std::max(drift, std::abs(mass(f) - m0) / m0);

  nlohmann::json s;
  s["linear"] = cfg.model.beta.is_zero();
  s["eps"] = run.params.eps;
  s["grid"] = {{"d", run.grid.dim()}, {"N", run.grid.n()}, {"L", run.grid.half_length()}};
  s["dt"] = opts.dt;
  s["nodes"] = u.size();
  s["mass_initial"] = m0;
  s["mass_drift_relative"] = drift;
  s["u0_fl1"] = fl1_norm(run.u0);
  s["final_fl1"] = fl1_norm(u.back());
  s["sup_error_vs_ansatz"] = cmp.sup_fl1;
  if (cfg.model.beta.is_zero()) {
    double worst = 0.0;
    for (std::size_t m = 0; m < u.size(); ++m) {
      const ComplexField free =
          free_propagate(run.u0, u.times[m] + cfg.model.horizon, cfg.model.n);
      worst = std::max(worst, fl1_norm(u.fields[m] - free));
    }
    s["sup_error_vs_free_flow"] = worst;
  }
  std::vector<double> errs = cmp.per_node;
  s["per_node_error"] = errs;
  s["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(u), std::move(s)};
}

void write_simulate_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                            const SimulateResult& r) {
  std::filesystem::create_directories(dir);
  nlohmann::json j = report_header(cfg);
  j["summary"] = r.summary;
  if (cfg.output.wants("json")) write_json(dir / "simulate.json", j);
  write_field(dir / "final_field.bin", r.trajectory.back());
  if (cfg.output.wants("csv")) {
    auto os = open_text(dir / "trajectory.csv");
    os << "t,mass,fl1,linf,error_vs_ansatz\n";
    const auto& errs = r.summary["per_node_error"];
    for (std::size_t m = 0; m < r.trajectory.size(); ++m) {
      const auto& f = r.trajectory.fields[m];
      os << r.trajectory.times[m] << ',' << mass(f) << ',' << fl1_norm(f) << ',' << linf_norm(f)
         << ',' << errs[m].get<double>() << '\n';
    }
    write_field_csv(dir / "final_field.csv", r.trajectory.back());
  }
  if (cfg.output.wants("pgm") && r.trajectory.grid.dim() == 2) {
    const auto& f = r.trajectory.back();
    RealField mod{f.grid, std::vector<double>(f.grid.size())};
    double hi = 0.0;
    for (std::size_t i = 0; i < mod.values.size(); ++i) {
      mod.values[i] = std::abs(f.samples[i]);
      hi = std::max(hi, mod.values[i]);
    }
    write_pgm(dir / "final_modulus.pgm", mod, 0.0, hi);
  }
}

// --- error sweep ---------------------------------------------------------------

double predicted_error_exponent(double p, int n) { return std::min(p + 2.0, 3.0 * p - 2.0 * n); }

SweepReport run_error_sweep(const ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& run_dir) {
  validate(cfg);
  if (cfg.numerics.node_intervals < 128 || cfg.numerics.node_intervals % 2 != 0) {
    throw ValidationError("sweep needs an even numerics.node_intervals >= 128");
  }
  const AnalyticNonlinearity g = cfg.nonlinearity();
  const auto& eps = cfg.sweep.eps;
  SweepReport rep;
  rep.points.resize(eps.size());
  rep.tolerance = cfg.sweep.slope_tolerance;
  rep.min_r2 = cfg.sweep.min_r2;
  rep.predicted = cfg.sweep.predicted.value_or(predicted_error_exponent(cfg.probe.p, cfg.model.n));

  parallel_for(eps.size(), cfg.workers, [&](std::size_t i) {
    const ProbeRun run = prepare_probe(cfg, cfg.probe_params(eps[i]), cfg.model.beta);
    SplitStepOptions opts;
    opts.dt = cfg.time_step(run.params);
    opts.node_intervals = cfg.numerics.node_intervals;
    if (run_dir && cfg.numerics.checkpoint) {
      opts.checkpoint_dir = *run_dir / ("eps_" + std::to_string(i));
    }
    const Trajectory u = splitstep_solve(run.u0, flow_of(cfg), g, cfg.model.beta, opts);
    const Trajectory v = ansatz_trajectory(run.params, g, cfg.model.beta, run.grid, u.times);
    SweepPoint& pt = rep.points[i];
    pt.eps = eps[i];
    pt.grid_points = run.grid.n();
    pt.half_length = run.grid.half_length();
    pt.dt = opts.dt;
    pt.sup_error = compare_solutions(u, v).sup_fl1;
    pt.defect = duhamel_defect_norm(v, flow_of(cfg), g, cfg.model.beta);
    pt.stability_ratio = pt.defect > 0.0 ? pt.sup_error / pt.defect : kNaN;
    pt.recovery_error = kNaN;
    if (cfg.model.dim == 1 && !cfg.model.beta.is_zero()) {
      const ComplexField reference =
          free_propagate(run.u0, 2.0 * cfg.model.horizon, cfg.model.n);
      const PhaseSamples phase =
          extract_phase(u.back(), reference, run.params, cfg.numerics.threshold);
      const SinogramRow row =
          line_integrals_from_phase(phase, run.params, g, run.grid.spacing());
      const SinogramRow oracle = xray_forward(cfg.model.beta, run.params.xi, row.points, 1);
      pt.recovery_error = row_error(row, oracle);
    }
  });

  std::vector<double> xs, es, ds;
  for (const auto& p : rep.points) {
    xs.push_back(p.eps);
    es.push_back(p.sup_error);
    ds.push_back(p.defect);
  }
  rep.error_fit = fit_power_law(xs, es);
  rep.defect_fit = fit_power_law(xs, ds);
  double lo = INFINITY, hi = 0.0;
  for (const auto& p : rep.points) {
    lo = std::min(lo, p.stability_ratio);
    hi = std::max(hi, p.stability_ratio);
  }
  rep.stability_spread = hi / lo;
  rep.pass = std::abs(rep.error_fit.slope - rep.predicted) <= rep.tolerance &&
             rep.error_fit.r2 >= rep.min_r2;
  return rep;
}

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"eps", p.eps},
                   {"N", p.grid_points},
                   {"L", p.half_length},
                   {"dt", p.dt},
                   {"sup_error", p.sup_error},
                   {"defect", p.defect},
                   {"stability_ratio", nan_to_null(p.stability_ratio)},
                   {"recovery_error", nan_to_null(p.recovery_error)}});
  }
  return {{"points", pts},
          {"error_fit", fit_json(r.error_fit)},
          {"defect_fit", fit_json(r.defect_fit)},
          {"predicted_exponent", r.predicted},
          {"tolerance", r.tolerance},
          {"min_r2", r.min_r2},
          {"stability_spread", r.stability_spread},
          {"pass", r.pass}};
}

void write_sweep_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                         const SweepReport& r) {
  std::filesystem::create_directories(dir);
  if (cfg.output.wants("csv")) {
    auto os = open_text(dir / "sweep.csv");
    os << "eps,N,L,dt,sup_error,defect,stability_ratio,recovery_error\n";
    for (const auto& p : r.points) {
      os << p.eps << ',' << p.grid_points << ',' << p.half_length << ',' << p.dt << ','
         << p.sup_error << ',' << p.defect << ',' << p.stability_ratio << ',' << p.recovery_error
         << '\n';
    }
  }
  if (cfg.output.wants("json")) {
    nlohmann::json j = report_header(cfg);
    j["sweep"] = to_json(r);
    write_json(dir / "sweep.json", j);
  }
}

// --- contraction -------------------------------------------------------------

ContractionSummary run_contraction_check(const ExperimentConfig& cfg) {
  if (cfg.model.dim != 1 && cfg.model.dim != 2) throw ValidationError("model.dim must be 1 or 2");
  const AnalyticNonlinearity g = cfg.nonlinearity();
  cfg.model.beta.validate();
  const Grid grid(cfg.model.dim, cfg.contraction.grid_points, cfg.contraction.half_length);
  const FlowSpec flow = flow_of(cfg);
  ContractionSummary sum;
  sum.delta0 = delta0_for(g, flow.horizon, sample(cfg.model.beta, grid));

  const double w = cfg.contraction.u0_width;
  const ComplexField shape = ComplexField::from_function(
      grid, [&](const Point& x) { return cplx(std::exp(-dot(x, x) / (2.0 * w * w)), 0.0); });
  const double shape_fl1 = fl1_norm(shape);

  struct Job {
    std::string label;
    double fraction;
    ComplexField u0;
  };
  std::vector<Job> jobs;
  for (double f : cfg.contraction.fractions) {
    jobs.push_back({"gaussian", f, (f * sum.delta0 / shape_fl1) * shape});
  }
  jobs.push_back({"zero", 0.0, ComplexField::zeros(grid)});
  if (!cfg.contraction.fractions.empty()) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double f = cfg.contraction.fractions.front();
    for (int t = 0; t < cfg.contraction.random_trials; ++t) {
      SpectralField c{grid, std::vector<cplx>(grid.size(), cplx{0.0, 0.0})};
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [i0, i1] = grid.axis_indices(k);
        const int k0 = grid.wavenumber(i0), k1 = grid.dim() == 2 ? grid.wavenumber(i1) : 0;
        if (std::abs(k0) <= 8 && std::abs(k1) <= 8) c.coeffs[k] = cplx(unit(rng), unit(rng));
      }
      const double s = fl1_norm(c);
      for (auto& z : c.coeffs) z *= f * sum.delta0 / s;
      jobs.push_back({"random_" + std::to_string(t), f, inverse_dft(c)});
    }
  }
  jobs.push_back({"above_threshold", cfg.contraction.reject_fraction,
                  (cfg.contraction.reject_fraction * sum.delta0 / shape_fl1) * shape});

  sum.cases.resize(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    ContractionCase& c = sum.cases[i];
    c.label = jobs[i].label;
    c.fraction = jobs[i].fraction;
    try {
      c.report = picard_solve(jobs[i].u0, flow, g, cfg.model.beta, cfg.numerics.simpson_intervals,
                              cfg.numerics.picard_tol, cfg.numerics.picard_max_iter)
                     .second;
    } catch (const ThresholdError& e) {
      c.rejected = true;
      c.message = e.what();
    } catch (const PicardDivergenceError& e) {
      c.report = e.report();
      c.message = e.what();
    }
    c.ratios_below_one = std::all_of(c.report.ratios.begin(), c.report.ratios.end(),
                                     [](double r) { return r < 1.0; });
    if (c.label == "above_threshold") {
      c.pass = c.rejected;
    } else if (c.label == "zero") {
      c.pass = !c.rejected && c.report.converged && c.report.iterations == 1;
    } else {
      c.pass = !c.rejected && c.report.converged && c.ratios_below_one && c.report.wp_bound_holds;
    }
  });
  sum.pass = std::all_of(sum.cases.begin(), sum.cases.end(),
                         [](const ContractionCase& c) { return c.pass; });
  return sum;
}

nlohmann::json to_json(const ContractionSummary& r) {
  nlohmann::json cases = nlohmann::json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"label", c.label},
                     {"fraction", c.fraction},
                     {"rejected", c.rejected},
                     {"message", c.message},
                     {"iterations", c.report.iterations},
                     {"converged", c.report.converged},
                     {"distances", c.report.distances},
                     {"ratios", c.report.ratios},
                     {"u0_fl1", c.report.u0_fl1},
                     {"sup_fl1", c.report.sup_fl1},
                     {"wp_bound_holds", c.report.wp_bound_holds},
                     {"ratios_below_one", c.ratios_below_one},
                     {"pass", c.pass}});
  }
  return {{"delta0", r.delta0}, {"cases", cases}, {"pass", r.pass}};
}

void write_contraction_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                               const ContractionSummary& r) {
  std::filesystem::create_directories(dir);
  if (cfg.output.wants("csv")) {
    auto os = open_text(dir / "contraction.csv");
    os << "case,fraction,iteration,distance,ratio\n";
    for (const auto& c : r.cases) {
      for (std::size_t k = 0; k < c.report.distances.size(); ++k) {
        os << c.label << ',' << c.fraction << ',' << k + 1 << ',' << c.report.distances[k] << ',';
        if (k > 0 && k - 1 < c.report.ratios.size()) os << c.report.ratios[k - 1];
        os << '\n';
      }
    }
  }
  if (cfg.output.wants("json")) {
    nlohmann::json j = report_header(cfg);
    j["contraction"] = to_json(r);
    write_json(dir / "contraction.json", j);
  }
}

// --- recovery ----------------------------------------------------------------

Grid reconstruction_grid(const ExperimentConfig& cfg) {
  return Grid(2, cfg.numerics.fbp_points, cfg.model.horizon);
}

RecoverResult run_recover(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::vector<Point> dirs = recovery_directions(cfg);
  const bool exact = cfg.numerics.recover_mode == "exact";
  RecoverResult res;
  res.sinogram.dim = res.oracle.dim = cfg.model.dim;
  res.sinogram.rows.resize(dirs.size());
  res.oracle.rows.resize(dirs.size());
  parallel_for(dirs.size(), cfg.workers, [&](std::size_t i) {
    res.sinogram.rows[i] =
        exact ? probe_direction_exact(cfg, dirs[i]) : probe_direction_pde(cfg, dirs[i]);
    res.oracle.rows[i] =
        xray_forward(cfg.model.beta, dirs[i], res.sinogram.rows[i].points, cfg.model.dim);
  });
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    res.sample_error = std::max(res.sample_error, row_error(res.sinogram.rows[i], res.oracle.rows[i]));
  }
  if (cfg.model.dim == 1) {
    res.integral = recover_integral_1d(res.sinogram);
    res.integral_truth = res.oracle.rows.front().values.front();
    res.integral_error = *res.integral_truth > 0.0
                             ? std::abs(*res.integral - *res.integral_truth) / *res.integral_truth
                             : std::abs(*res.integral);
  } else {
    const Grid out = reconstruction_grid(cfg);
    res.fbp = fbp_invert(res.sinogram, out);
    res.fbp_error = relative_l2_error(res.fbp->clamped, sample(cfg.model.beta, out));
  }
  return res;
}

nlohmann::json to_json(const RecoverResult& r) {
  nlohmann::json j;
  j["directions"] = r.sinogram.rows.size();
  j["masked_samples"] = r.sinogram.masked_count();
  j["sample_error"] = r.sample_error;
  if (r.integral) {
    j["integral"] = *r.integral;
    j["integral_truth"] = *r.integral_truth;
    j["integral_error"] = *r.integral_error;
  }
  if (r.fbp) {
    j["fbp_error"] = *r.fbp_error;
    j["fbp_min_value"] = r.fbp->min_value;
    j["fbp_negative_fraction"] = r.fbp->negative_fraction;
  }
  return j;
}

void write_recover_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                           const RecoverResult& r) {
  std::filesystem::create_directories(dir);
  if (cfg.output.wants("csv")) {
    write_sinogram_csv(dir / "sinogram.csv", r.sinogram);
    write_sinogram_csv(dir / "oracle_sinogram.csv", r.oracle);
  }
  if (cfg.output.wants("json")) {
    nlohmann::json j = report_header(cfg);
    j["recover"] = to_json(r);
    write_json(dir / "recover.json", j);
  }
  if (r.fbp) {
    write_field(dir / "reconstruction.bin", r.fbp->clamped);
    if (cfg.output.wants("pgm")) {
      const double hi = std::max(cfg.model.beta.max_value(), 1e-300);
      write_pgm(dir / "reconstruction.pgm", r.fbp->clamped, 0.0, hi);
      write_sinogram_pgm(dir / "sinogram.pgm", r.sinogram);
    }
  }
}

// --- forward / inverse transforms ----------------------------------------------

Sinogram run_xray_forward(const ExperimentConfig& cfg) {
  cfg.model.beta.validate();
  const double T = cfg.model.horizon;
  if (cfg.model.dim == 1) {
    Sinogram s;
    s.dim = 1;
    for (const Point xi : {Point{1.0, 0.0}, Point{-1.0, 0.0}}) {
      s.rows.push_back(xray_forward(cfg.model.beta, xi, {-T * xi}, 1));
    }
    return s;
  }
  if (cfg.probe.directions < 1) throw ValidationError("probe.directions must be >= 1");
  return xray_forward_sinogram(cfg.model.beta, cfg.probe.directions, cfg.numerics.offsets, T, T,
                               cfg.workers);
}

void write_xray_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                        const Sinogram& s) {
  std::filesystem::create_directories(dir);
  write_sinogram_csv(dir / "sinogram.csv", s);
  if (cfg.output.wants("pgm") && s.dim == 2) write_sinogram_pgm(dir / "sinogram.pgm", s);
  if (cfg.output.wants("json")) {
    nlohmann::json j = report_header(cfg);
    j["xray"] = {{"directions", s.rows.size()}, {"samples", s.masked_count()}};
    write_json(dir / "xray.json", j);
  }
}

void write_fbp_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                       const FbpResult& r, const std::optional<double>& error) {
  std::filesystem::create_directories(dir);
  write_field(dir / "reconstruction.bin", r.clamped);
  if (cfg.output.wants("pgm")) {
    double hi = 0.0;
    for (double v : r.clamped.values) hi = std::max(hi, v);
    write_pgm(dir / "reconstruction.pgm", r.clamped, 0.0, hi > 0.0 ? hi : 1.0);
  }
  if (cfg.output.wants("json")) {
    nlohmann::json j = report_header(cfg);
    j["fbp"] = {{"min_value", r.min_value}, {"negative_fraction", r.negative_fraction}};
    if (error) j["fbp"]["relative_l2_error"] = *error;
    write_json(dir / "fbp.json", j);
  }
}

}  // namespace nlprobe
