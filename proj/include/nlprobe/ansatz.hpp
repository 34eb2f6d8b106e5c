#pragma once

#include <span>
#include <vector>

#include "nlprobe/grid.hpp"
#include "nlprobe/nonlinearity.hpp"
#include "nlprobe/regression.hpp"
#include "nlprobe/trajectory.hpp"

namespace nlprobe {

/// Initial envelope a0. Gaussian A exp(-|y - c|^2 / (2 w^2)) by default.
struct InitialProfile {
  enum class Kind { kGaussian, kConstant };

  Kind kind = Kind::kGaussian;
  double amplitude = 1.0;
  double width = 1.0;
  Point center{0.0, 0.0};

  double operator()(const Point& y) const;
  double max_abs() const { return std::abs(amplitude); }
};

/// One wave-packet experiment: dispersion order n, amplitude exponent p,
/// scale eps, horizon T, probing direction xi, and the envelope a0.
struct ProbeParams {
  int dim = 1;
  int n = 1;
  double p = 1.25;
  double eps = 0.1;
  double horizon = 2.0;
  Point xi{1.0, 0.0};
  InitialProfile a0;

  /// Checks |xi| = 1, p > n, 0 < eps < 1, T > 0, supp beta inside |x| < T
  /// and eps^(2p) max|a0|^2 < R/4. Throws ValidationError naming the
  /// violated hypothesis.
  void validate(const AnalyticNonlinearity& g, const BumpCoefficient& beta) const;
};

/// Periodic box for a probe: L >= 3T + 8w/eps rounded up to a multiple of
/// pi (so unit lattice frequencies exist), N the smallest power of two with
/// Nyquist frequency >= `nyquist_frequency`.
Grid probe_grid(const ProbeParams& params, double nyquist_frequency = 8.0, int min_points = 64);

/// int_0^length beta(x + s xi) ds, clipped to the support ball. Negative
/// lengths integrate backwards (sign flips).
double segment_integral(const BumpCoefficient& beta, const Point& x, const Point& xi,
                        double length);

/// I(t, x) = int_0^t beta(x/eps + eps^(-2n) (t - s) xi - T xi) ds in the
/// rescaled (t, x) variables of the profile a.
double beta_segment_integral(const ProbeParams& params, const BumpCoefficient& beta, double t,
                             const Point& x);

/// The geometric-optics profile a(t, x) in rescaled variables.
cplx profile_a(const ProbeParams& params, const AnalyticNonlinearity& g,
               const BumpCoefficient& beta, double t, const Point& x);

/// v(t, x) = eps^p a(eps^(2n)(t+T), eps(x + T xi)) exp(i(x.xi + t/2n)).
cplx approx_solution_v_at(const ProbeParams& params, const AnalyticNonlinearity& g,
                          const BumpCoefficient& beta, double t, const Point& x);

/// Precomputed eps^(-2n) I at physical (t, x) pairs: the physical-time
/// segment integral int_0^(t+T) beta(x + s xi) ds on every grid point.
class PhaseIntegralTable {
 public:
  PhaseIntegralTable(const ProbeParams& params, const BumpCoefficient& beta, const Grid& grid,
                     std::vector<double> times, int workers = 1);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& times() const { return times_; }
  /// Physical-time segment integral at node m, grid index i.
  double segment(std::size_t m, std::size_t i) const { return values_[m * grid_.size() + i]; }
  /// I(t', x') in rescaled variables (= eps^(2n) * segment).
  double rescaled(std::size_t m, std::size_t i) const;

 private:
  Grid grid_;
  std::vector<double> times_;
  std::vector<double> values_;
  double eps_pow_2n_;
};

/// Throws ValidationError if xi is not a lattice frequency of the grid.
void require_lattice_direction(const ProbeParams& params, const Grid& grid);

ComplexField approx_solution_v(const ProbeParams& params, const AnalyticNonlinearity& g,
                               const BumpCoefficient& beta, double t, const Grid& grid);

/// v at node m of a precomputed table.
ComplexField approx_solution_v(const ProbeParams& params, const AnalyticNonlinearity& g,
                               const PhaseIntegralTable& table, std::size_t m);

/// v sampled on every node of `times`.
Trajectory ansatz_trajectory(const ProbeParams& params, const AnalyticNonlinearity& g,
                             const BumpCoefficient& beta, const Grid& grid,
                             std::vector<double> times, int workers = 1);

/// v(-T). Throws ThresholdError when ||u0||_FL1 >= delta0 (outside the
/// contraction regime).
ComplexField initial_data(const ProbeParams& params, const AnalyticNonlinearity& g,
                          const BumpCoefficient& beta, const Grid& grid);

/// delta0 for a sampled beta; the beta -> 0 limit sqrt(R)/4 when beta == 0.
double delta0_for(const AnalyticNonlinearity& g, double horizon, const RealField& beta);

/// Defect E(t) = (i d/dt + (1/2n)(-Delta)^n) v - beta G(|v|^2) v, with a
/// fourth-order centered difference in t (step 1e-3 T) and the spatial
/// operator applied spectrally.
ComplexField defect_E(const ProbeParams& params, const AnalyticNonlinearity& g,
                      const BumpCoefficient& beta, double t, const Grid& grid);

/// ||D^j_x a(t', .)||_FL1 at the rescaled time t' = 2T eps^(2n) (the
/// profile after the full probe), where D^j sums all mixed partials of
/// total order j. Sampled through x' = eps(x + T xi) on `grid`.
double derivative_norm(const ProbeParams& params, const AnalyticNonlinearity& g,
                       const BumpCoefficient& beta, int j, const Grid& grid);

/// Log-log fit of derivative_norm against eps over `eps_values`.
PowerLawFit derivative_norm_check(const ProbeParams& params, const AnalyticNonlinearity& g,
                             const BumpCoefficient& beta, int j, std::span<const double> eps_values,
                             double nyquist_frequency = 8.0);

}  // namespace nlprobe
