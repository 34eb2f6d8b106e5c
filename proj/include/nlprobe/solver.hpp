#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "nlprobe/errors.hpp"
#include "nlprobe/grid.hpp"
#include "nlprobe/nonlinearity.hpp"
#include "nlprobe/trajectory.hpp"

namespace nlprobe {

/// Linear part of the model on [-T, T]: (i d/dt + (1/2n)(-Delta)^n) u = beta G(|u|^2) u.
struct FlowSpec {
  int n = 1;
  double horizon = 1.0;
};

struct PicardReport {
  int iterations = 0;
  /// Sup-over-nodes FL1 distance between successive iterates.
  std::vector<double> distances;
  std::vector<double> ratios;
  double final_residual = 0.0;
  bool converged = false;
  double u0_fl1 = 0.0;
  double delta0 = 0.0;
  double sup_fl1 = 0.0;
  /// sup_t ||u(t)||_FL1 <= 2 ||u0||_FL1 (1 + tol)
  bool wp_bound_holds = false;
};

class PicardDivergenceError : public NonConvergenceError {
 public:
  PicardDivergenceError(const std::string& what, PicardReport report)
      : NonConvergenceError(what), report_(std::move(report)) {}
  const PicardReport& report() const { return report_; }

 private:
  PicardReport report_;
};

/// Fixed point of the discretized Duhamel map on `intervals` + 1 uniform
/// nodes of [-T, T]. The time integral is taken in the interaction picture
/// with composite Simpson weights (exact Simpson at even nodes, the matching
/// quadratic rule at odd nodes). Starts from the free flow of u0.
std::pair<Trajectory, PicardReport> picard_solve(const ComplexField& u0, const FlowSpec& flow,
                                                 const AnalyticNonlinearity& g,
                                                 const BumpCoefficient& beta, int intervals,
                                                 double tol, int max_iter);

struct SplitStepOptions {
  double dt = 1e-2;
  /// Trajectory nodes stored: intervals + 1, uniform over [-T, T].
  int node_intervals = 128;
  /// When set, every stored node is written here with a JSON manifest and
  /// an interrupted solve with the same inputs resumes from the last node.
  std::optional<std::filesystem::path> checkpoint_dir;
};

/// Strang splitting: half linear flow, exact nonlinear phase rotation
/// u exp(-i dt beta G(|u|^2)), half linear flow. The step is shrunk so an
/// integer number of steps fits each node interval.
Trajectory splitstep_solve(const ComplexField& u0, const FlowSpec& flow,
                           const AnalyticNonlinearity& g, const BumpCoefficient& beta,
                           const SplitStepOptions& options);

/// sup_t || int_{-T}^t e^{i(t-s)(-Delta)^n/2n} E(s) ds ||_FL1 for the
/// defect E of a sampled trajectory. Uses the identity
///   int e^{i(t-s)L} (i d/ds + L) v ds = i (v(t) - e^{i(t+T)L} v(-T)),
/// so only the nonlinear term needs quadrature. Needs >= 129 uniform nodes.
double duhamel_defect_norm(const Trajectory& v, const FlowSpec& flow,
                           const AnalyticNonlinearity& g, const BumpCoefficient& beta);

/// Same quantity from explicitly sampled defects E(t_m) (e.g. defect_E),
/// integrated with the same Simpson rule.
double duhamel_defect_norm_from_samples(const std::vector<ComplexField>& defects,
                                        const std::vector<double>& times, int n);

struct SolutionComparison {
  double sup_fl1 = 0.0;
  std::vector<double> per_node;
};

SolutionComparison compare_solutions(const Trajectory& u, const Trajectory& v);

/// Cumulative integrals of uniformly sampled values (spacing h): exact
/// composite Simpson at even nodes. `values` has an odd number of entries.
std::vector<cplx> cumulative_simpson(std::span<const cplx> values, double h);

}  // namespace nlprobe
