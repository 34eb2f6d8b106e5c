#include "nlprobe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "nlprobe/dft.hpp"
#include "nlprobe/field_io.hpp"
#include "nlprobe/spectral.hpp"

namespace nlprobe {

namespace {

constexpr cplx kI{0.0, 1.0};

using Rows = std::vector<std::vector<cplx>>;

// Integral over interval j of the quadratic through three neighbouring
// nodes; pairs of intervals reproduce composite Simpson.
void accumulate_interval(const Rows& q, std::size_t j, double h, std::vector<cplx>& acc) {
  const std::size_t k = acc.size();
  if (j % 2 == 0) {
    for (std::size_t i = 0; i < k; ++i) {
      acc[i] += h / 12.0 * (5.0 * q[j][i] + 8.0 * q[j + 1][i] - q[j + 2][i]);
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      acc[i] += h / 12.0 * (-q[j - 1][i] + 8.0 * q[j][i] + 5.0 * q[j + 1][i]);
    }
  }
}

Rows cumulative_rows(const Rows& q, double h) {
  Rows out(q.size(), std::vector<cplx>(q.front().size(), cplx{0.0, 0.0}));
  std::vector<cplx> acc(q.front().size(), cplx{0.0, 0.0});
  for (std::size_t j = 0; j + 1 < q.size(); ++j) {
    accumulate_interval(q, j, h, acc);
    out[j + 1] = acc;
  }
  return out;
}

void require_simpson_nodes(std::size_t nodes, std::size_t minimum, const char* what) {
  if (nodes < minimum || nodes % 2 == 0) {
    throw ValidationError(std::string(what) + ": need an even number of intervals and at least " +
                          std::to_string(minimum) + " nodes");
  }
}

double spectral_fl1(std::span<const cplx> c) {
  double s = 0.0;
  for (const auto& z : c) s += std::abs(z);
  return s;
}

double beta_delta0(const AnalyticNonlinearity& g, double horizon, const RealField& beta) {
  const double bf = fl1_norm(beta);
  if (bf == 0.0) return 0.99 * std::sqrt(g.radius()) / 4.0;
  return delta0(g, horizon, bf);
}

// beta G(|u|^2) u in place on physical samples, with the domain check on all points.
void nonlinear_term(const AnalyticNonlinearity& g, const std::vector<double>& beta,
                    std::span<const cplx> u, std::span<cplx> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = std::norm(u[i]);
    if (!(m < g.radius())) eval_G(g, m);  // throws DomainError
    out[i] = beta[i] == 0.0 ? cplx{0.0, 0.0} : beta[i] * eval_G(g, m) * u[i];
  }
}

// --- checkpointing ---------------------------------------------------------

nlohmann::json run_signature(const ComplexField& u0, const FlowSpec& flow,
                             const AnalyticNonlinearity& g, const BumpCoefficient& beta,
                             int steps, int intervals) {
  double s_re = 0.0, s_im = 0.0, s_abs = 0.0;
  for (const auto& z : u0.samples) {
    s_re += z.real();
    s_im += z.imag();
    s_abs += std::norm(z);
  }
  return {
      {"n", flow.n},
      {"horizon", flow.horizon},
      {"steps", steps},
      {"node_intervals", intervals},
      {"grid", {{"d", u0.grid.dim()}, {"N", u0.grid.n()}, {"L", u0.grid.half_length()}}},
      {"G", {{"coeffs", g.coeffs()}, {"R", g.radius()}}},
      {"beta",
       {{"kind", beta.kind == BumpCoefficient::Kind::kSmooth ? "smooth" : "gaussian-truncated"},
        {"amplitude", beta.amplitude},
        {"radius", beta.radius},
        {"width", beta.width},
        {"center", {beta.center[0], beta.center[1]}}}},
      {"u0_checksum", {s_re, s_im, s_abs}},
  };
}

std::filesystem::path node_path(const std::filesystem::path& dir, std::size_t m) {
  std::ostringstream name;
  name << "node_" << std::setw(5) << std::setfill('0') << m << ".bin";
  return dir / name.str();
}

void write_manifest(const std::filesystem::path& dir, const nlohmann::json& signature,
                    const std::vector<double>& times, std::size_t completed) {
  nlohmann::json m;
  m["signature"] = signature;
  m["times"] = times;
  m["completed_nodes"] = completed;
  std::vector<std::string> files;
  for (std::size_t i = 0; i < completed; ++i) files.push_back(node_path(dir, i).filename().string());
  m["files"] = files;
  const auto tmp = dir / "manifest.json.tmp";
  {
    std::ofstream os(tmp);
    os << m.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, dir / "manifest.json");
}

}  // namespace

std::vector<cplx> cumulative_simpson(std::span<const cplx> values, double h) {
  require_simpson_nodes(values.size(), 3, "cumulative_simpson");
  Rows q;
  for (const auto& v : values) q.push_back({v});
  const Rows c = cumulative_rows(q, h);
  std::vector<cplx> out;
  for (const auto& r : c) out.push_back(r[0]);
  return out;
}

std::pair<Trajectory, PicardReport> picard_solve(const ComplexField& u0, const FlowSpec& flow,
                                                 const AnalyticNonlinearity& g,
                                                 const BumpCoefficient& beta, int intervals,
                                                 double tol, int max_iter) {
  if (intervals < 64 || intervals % 2 != 0) {
    throw ValidationError("picard_solve: need an even number of time intervals M >= 64");
  }
  if (!(tol > 0.0) || max_iter < 1) throw ValidationError("picard_solve: bad tolerance/iterations");
  const Grid& grid = u0.grid;
  const RealField beta_field = sample(beta, grid);

  PicardReport report;
  report.u0_fl1 = fl1_norm(u0);
  report.delta0 = beta_delta0(g, flow.horizon, beta_field);
  if (!(report.u0_fl1 < report.delta0)) {
    throw ThresholdError("picard_solve: ||u0||_FL1 = " + std::to_string(report.u0_fl1) +
                         " is not below delta0 = " + std::to_string(report.delta0));
  }

  const auto times = uniform_nodes(-flow.horizon, flow.horizon, intervals);
  const double h = times[1] - times[0];
  const std::size_t nodes = times.size();
  const std::size_t size = grid.size();
  const auto& dft = DftEngine::for_grid(grid);
  const std::vector<double> sym = dispersion_symbol(grid, flow.n);

  // Free-flow factors e^{i (t_m + T) lambda_k}.
  Rows prop(nodes, std::vector<cplx>(size));
  for (std::size_t m = 0; m < nodes; ++m) {
    for (std::size_t k = 0; k < size; ++k) prop[m][k] = std::polar(1.0, (times[m] + flow.horizon) * sym[k]);
  }

  const SpectralField c0 = forward_dft(u0);
  Rows current(nodes, std::vector<cplx>(size));
  for (std::size_t m = 0; m < nodes; ++m) {
    for (std::size_t k = 0; k < size; ++k) current[m][k] = prop[m][k] * c0.coeffs[k];
  }

  Rows integrand(nodes, std::vector<cplx>(size));
  std::vector<cplx> phys(size), nl(size), nlhat(size);
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t m = 0; m < nodes; ++m) {
      dft.inverse(current[m], phys);
      nonlinear_term(g, beta_field.values, phys, nl);
      dft.forward(nl, nlhat);
      for (std::size_t k = 0; k < size; ++k) integrand[m][k] = std::conj(prop[m][k]) * nlhat[k];
    }
    const Rows q = cumulative_rows(integrand, h);
    double dist = 0.0;
    for (std::size_t m = 0; m < nodes; ++m) {
      double d = 0.0;
      for (std::size_t k = 0; k < size; ++k) {
        const cplx next = prop[m][k] * (c0.coeffs[k] - kI * q[m][k]);
        d += std::abs(next - current[m][k]);
        current[m][k] = next;
      }
      dist = std::max(dist, d);
    }
    report.iterations = it;
    if (!report.distances.empty() && report.distances.back() > 0.0) {
      report.ratios.push_back(dist / report.distances.back());
    }
    report.distances.push_back(dist);
    report.final_residual = dist;
    if (dist < tol) {
      report.converged = true;
      break;
    }
  }

  std::vector<ComplexField> fields;
  fields.reserve(nodes);
  for (std::size_t m = 0; m < nodes; ++m) {
    report.sup_fl1 = std::max(report.sup_fl1, spectral_fl1(current[m]));
    std::vector<cplx> s(size);
    dft.inverse(current[m], s);
    fields.emplace_back(grid, std::move(s));
  }
  report.wp_bound_holds = report.sup_fl1 <= 2.0 * report.u0_fl1 * (1.0 + tol);

  if (!report.converged && !report.ratios.empty() && report.ratios.back() >= 1.0) {
    throw PicardDivergenceError("picard_solve: no contraction after " +
                                    std::to_string(report.iterations) + " iterations (last ratio " +
                                    std::to_string(report.ratios.back()) + ")",
                                report);
  }
  return {Trajectory(grid, times, std::move(fields)), report};
}

Trajectory splitstep_solve(const ComplexField& u0, const FlowSpec& flow,
                           const AnalyticNonlinearity& g, const BumpCoefficient& beta,
                           const SplitStepOptions& options) {
  if (!(options.dt > 0.0)) throw ValidationError("splitstep_solve: dt must be positive");
  if (options.node_intervals < 1) throw ValidationError("splitstep_solve: need >= 1 node interval");
  const Grid& grid = u0.grid;
  const int intervals = options.node_intervals;
  const double span = 2.0 * flow.horizon;
  const int per_node = std::max(1, static_cast<int>(std::ceil(span / intervals / options.dt - 1e-9)));
  const int steps = per_node * intervals;
  const double dt = span / steps;
  const auto times = uniform_nodes(-flow.horizon, flow.horizon, intervals);

  const RealField beta_field = sample(beta, grid);
  const std::vector<double> sym = dispersion_symbol(grid, flow.n);
  std::vector<cplx> half(grid.size());
  for (std::size_t k = 0; k < half.size(); ++k) half[k] = std::polar(1.0, 0.5 * dt * sym[k]);
  const auto& dft = DftEngine::for_grid(grid);

  std::vector<ComplexField> fields;
  fields.reserve(times.size());
  std::vector<cplx> u = u0.samples;
  std::size_t start_node = 0;

  nlohmann::json signature;
  if (options.checkpoint_dir) {
    const auto& dir = *options.checkpoint_dir;
    std::filesystem::create_directories(dir);
    signature = run_signature(u0, flow, g, beta, steps, intervals);
    const auto manifest_path = dir / "manifest.json";
    if (std::filesystem::exists(manifest_path)) {
      std::ifstream is(manifest_path);
      const auto m = nlohmann::json::parse(is);
      if (m.at("signature") == signature) {
        const std::size_t done = m.at("completed_nodes").get<std::size_t>();
        for (std::size_t i = 0; i < done; ++i) fields.push_back(read_field(node_path(dir, i)));
        if (!fields.empty()) {
          start_node = fields.size() - 1;
          u = fields.back().samples;
          fields.pop_back();  // re-emitted below
        }
      }
    }
  }

  std::vector<cplx> c(grid.size());
  const bool linear = beta.is_zero();
  auto store = [&](std::size_t m) {
    ComplexField f(grid, u);
    if (options.checkpoint_dir) {
      write_field(node_path(*options.checkpoint_dir, m), f);
      write_manifest(*options.checkpoint_dir, signature, times, m + 1);
    }
    fields.push_back(std::move(f));
  };

  store(start_node);
  for (std::size_t m = start_node; m + 1 < times.size(); ++m) {
    dft.forward(u, c);
    for (int s = 0; s < per_node; ++s) {
      for (std::size_t k = 0; k < c.size(); ++k) c[k] *= half[k];
      if (!linear) {
        dft.inverse(c, u);
        for (std::size_t i = 0; i < u.size(); ++i) {
          const double b = beta_field.values[i];
          const double mod2 = std::norm(u[i]);
          if (!(mod2 < g.radius())) eval_G(g, mod2);  // throws DomainError
          if (b != 0.0) u[i] *= std::polar(1.0, -dt * b * eval_G(g, mod2));
        }
        dft.forward(u, c);
      }
      for (std::size_t k = 0; k < c.size(); ++k) c[k] *= half[k];
    }
    dft.inverse(c, u);
    store(m + 1);
  }
  return Trajectory(grid, times, std::move(fields));
}

double duhamel_defect_norm(const Trajectory& v, const FlowSpec& flow,
                           const AnalyticNonlinearity& g, const BumpCoefficient& beta) {
  require_simpson_nodes(v.size(), 129, "duhamel_defect_norm");
  if (!v.uniform()) throw ValidationError("duhamel_defect_norm: nodes must be uniform");
  const Grid& grid = v.grid;
  const std::size_t nodes = v.size();
  const std::size_t size = grid.size();
  const double h = v.times[1] - v.times[0];
  const RealField beta_field = sample(beta, grid);
  const std::vector<double> sym = dispersion_symbol(grid, flow.n);
  const auto& dft = DftEngine::for_grid(grid);

  Rows vhat(nodes, std::vector<cplx>(size)), integrand(nodes, std::vector<cplx>(size));
  std::vector<cplx> nl(size), nlhat(size);
  for (std::size_t m = 0; m < nodes; ++m) {
    dft.forward(v.fields[m].samples, vhat[m]);
    nonlinear_term(g, beta_field.values, v.fields[m].samples, nl);
    dft.forward(nl, nlhat);
    const double s = v.times[m] - v.times[0];
    for (std::size_t k = 0; k < size; ++k) integrand[m][k] = std::polar(1.0, -s * sym[k]) * nlhat[k];
  }
  const Rows q = cumulative_rows(integrand, h);
  double sup = 0.0;
  for (std::size_t m = 0; m < nodes; ++m) {
    const double s = v.times[m] - v.times[0];
    double acc = 0.0;
    for (std::size_t k = 0; k < size; ++k) {
      const cplx p = std::polar(1.0, s * sym[k]);
      acc += std::abs(kI * (vhat[m][k] - p * vhat[0][k]) - p * q[m][k]);
    }
    sup = std::max(sup, acc);
  }
  return sup;
}

double duhamel_defect_norm_from_samples(const std::vector<ComplexField>& defects,
                                        const std::vector<double>& times, int n) {
  if (defects.size() != times.size()) throw ShapeMismatchError("defects/times size mismatch");
  require_simpson_nodes(times.size(), 3, "duhamel_defect_norm_from_samples");
  const Grid& grid = defects.front().grid;
  const std::size_t size = grid.size();
  const double h = times[1] - times[0];
  const std::vector<double> sym = dispersion_symbol(grid, n);
  Rows integrand(times.size(), std::vector<cplx>(size));
  for (std::size_t m = 0; m < times.size(); ++m) {
    const SpectralField e = forward_dft(defects[m]);
    const double s = times[m] - times[0];
    for (std::size_t k = 0; k < size; ++k) integrand[m][k] = std::polar(1.0, -s * sym[k]) * e.coeffs[k];
  }
  const Rows q = cumulative_rows(integrand, h);
  double sup = 0.0;
  for (std::size_t m = 0; m < times.size(); ++m) {
    // |e^{i s lambda} q| = |q| per mode.
    sup = std::max(sup, spectral_fl1(q[m]));
  }
  return sup;
}

SolutionComparison compare_solutions(const Trajectory& u, const Trajectory& v) {
  require_same_grid(u.grid, v.grid, "compare_solutions");
  if (u.size() != v.size()) throw ShapeMismatchError("compare_solutions: node counts differ");
  for (std::size_t m = 0; m < u.size(); ++m) {
    if (std::abs(u.times[m] - v.times[m]) > 1e-12 * std::max(1.0, std::abs(u.times[m]))) {
      throw ShapeMismatchError("compare_solutions: time nodes differ");
    }
  }
  SolutionComparison out;
  out.per_node.reserve(u.size());
  for (std::size_t m = 0; m < u.size(); ++m) {
    const double d = fl1_norm(u.fields[m] - v.fields[m]);
    out.per_node.push_back(d);
    out.sup_fl1 = std::max(out.sup_fl1, d);
  }
  return out;
}

}  // namespace nlprobe
