#include "nlprobe/ansatz.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlprobe/errors.hpp"
#include "nlprobe/parallel.hpp"
#include "nlprobe/quadrature.hpp"
#include "nlprobe/spectral.hpp"

namespace nlprobe {

namespace {

constexpr cplx kI{0.0, 1.0};

// x + s xi restricted to the support ball: returns the (lo, hi) parameter
// range inside the ball, or lo >= hi when the line misses it.
std::pair<double, double> chord(const BumpCoefficient& beta, const Point& x, const Point& xi) {
  const Point y = x - beta.center;
  const double b = dot(xi, y);
  const double c = dot(y, y) - beta.radius * beta.radius;
  const double disc = b * b - c;
  if (disc <= 0.0) return {0.0, 0.0};
  const double root = std::sqrt(disc);
  return {-b - root, -b + root};
}

// Value of v at physical (t, x) given the physical segment integral.
cplx packet_value(const ProbeParams& pr, const AnalyticNonlinearity& g, double t, const Point& x,
                  double segment) {
  const Point y = pr.eps * (x + (t + 2.0 * pr.horizon) * pr.xi);
  const double a0 = pr.a0(y);
  const double gm = eval_G(g, std::pow(pr.eps, 2.0 * pr.p) * a0 * a0);
  const double carrier = dot(x, pr.xi) + t / (2.0 * pr.n);
  return std::pow(pr.eps, pr.p) * a0 * std::polar(1.0, carrier - gm * segment);
}

// sum over |alpha| = j of d^alpha, applied spectrally.
ComplexField mixed_derivative_sum(const ComplexField& f, int j) {
  if (j == 0) return f;
  SpectralField c = forward_dft(f);
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    const Point w = c.grid.frequency(k);
    cplx m{0.0, 0.0};
    if (c.grid.dim() == 1) {
      m = std::pow(kI * w[0], j);
    } else {
      for (int j1 = 0; j1 <= j; ++j1) m += std::pow(kI * w[0], j1) * std::pow(kI * w[1], j - j1);
    }
    c.coeffs[k] *= m;
  }
  return inverse_dft(c);
}

}  // namespace

double InitialProfile::operator()(const Point& y) const {
  if (kind == Kind::kConstant) return amplitude;
  const Point d = y - center;
  return amplitude * std::exp(-dot(d, d) / (2.0 * width * width));
}

void ProbeParams::validate(const AnalyticNonlinearity& g, const BumpCoefficient& beta) const {
  if (dim != 1 && dim != 2) throw ValidationError("probe dimension must be 1 or 2");
  if (n < 1) throw ValidationError("dispersion order n must be a positive integer");
  if (std::abs(norm(xi) - 1.0) > 1e-12) throw ValidationError("hypothesis |xi| = 1 violated");
  if (dim == 1 && xi[1] != 0.0) throw ValidationError("1D probe direction must be +-1");
  if (!(p > n)) {
    throw ValidationError("hypothesis p > n violated (p = " + std::to_string(p) +
                          ", n = " + std::to_string(n) + ")");
  }
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("hypothesis 0 < eps < 1 violated");
  if (!(horizon > 0.0)) throw ValidationError("hypothesis T > 0 violated");
  if (a0.kind == InitialProfile::Kind::kGaussian && !(a0.width > 0.0)) {
    throw ValidationError("a0 width must be positive");
  }
  beta.validate();
  if (!beta.is_zero() && !(norm(beta.center) + beta.radius < horizon)) {
    throw ValidationError("hypothesis supp(beta) inside {|x| < T} violated");
  }
  const double m = std::pow(eps, 2.0 * p) * a0.max_abs() * a0.max_abs();
  if (!(m < g.radius() / 4.0)) {
    throw ValidationError("admissibility eps^(2p) max|a0|^2 < R/4 violated");
  }
}

Grid probe_grid(const ProbeParams& params, double nyquist_frequency, int min_points) {
  const double w = params.a0.kind == InitialProfile::Kind::kGaussian ? params.a0.width : 1.0;
  const double reach = 3.0 * params.horizon + 8.0 * w / params.eps;
  const double L = std::numbers::pi * std::ceil(reach / std::numbers::pi);
  const double needed = 2.0 * L * nyquist_frequency / std::numbers::pi;
  int n = 8;
  while (n < needed || n < min_points) n *= 2;
  return Grid(params.dim, n, L);
}

double segment_integral(const BumpCoefficient& beta, const Point& x, const Point& xi,
                        double length) {
  if (beta.is_zero() || length == 0.0) return 0.0;
  if (length < 0.0) return -segment_integral(beta, x + length * xi, xi, -length);
  auto [lo, hi] = chord(beta, x, xi);
  lo = std::max(lo, 0.0);
  hi = std::min(hi, length);
  if (!(hi > lo)) return 0.0;
  return integrate_adaptive([&](double s) { return beta(x + s * xi); }, lo, hi);
}

double beta_segment_integral(const ProbeParams& params, const BumpCoefficient& beta, double t,
                             const Point& x) {
  const double e2n = std::pow(params.eps, 2.0 * params.n);
  const Point start = (1.0 / params.eps) * x - params.horizon * params.xi;
  return e2n * segment_integral(beta, start, params.xi, t / e2n);
}

cplx profile_a(const ProbeParams& params, const AnalyticNonlinearity& g,
               const BumpCoefficient& beta, double t, const Point& x) {
  const double eps = params.eps;
  const double e2n = std::pow(eps, 2.0 * params.n);
  const Point y = x + (eps / e2n * t) * params.xi;
  const double a0 = params.a0(y);
  const double gm = eval_G(g, std::pow(eps, 2.0 * params.p) * a0 * a0);
  // eps^(-2n) * I is the physical-length segment integral; using it directly
  // avoids forming eps^(-2n) and eps^(2n) separately.
  const Point start = (1.0 / eps) * x - params.horizon * params.xi;
  const double segment = segment_integral(beta, start, params.xi, t / e2n);
  return a0 * std::polar(1.0, -gm * segment);
}

cplx approx_solution_v_at(const ProbeParams& params, const AnalyticNonlinearity& g,
                          const BumpCoefficient& beta, double t, const Point& x) {
  const double tr = std::pow(params.eps, 2.0 * params.n) * (t + params.horizon);
  const Point xr = params.eps * (x + params.horizon * params.xi);
  const double carrier = dot(x, params.xi) + t / (2.0 * params.n);
  return std::pow(params.eps, params.p) * profile_a(params, g, beta, tr, xr) *
         std::polar(1.0, carrier);
}

PhaseIntegralTable::PhaseIntegralTable(const ProbeParams& params, const BumpCoefficient& beta,
                                       const Grid& grid, std::vector<double> times, int workers)
    : grid_(grid),
      times_(std::move(times)),
      values_(times_.size() * grid.size(), 0.0),
      eps_pow_2n_(std::pow(params.eps, 2.0 * params.n)) {
  if (beta.is_zero()) return;
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    const Point x = grid.point(i);
    // Skip points whose full ray misses the support.
    const auto [lo, hi] = chord(beta, x, params.xi);
    if (!(hi > lo)) return;
    for (std::size_t m = 0; m < times_.size(); ++m) {
      values_[m * grid_.size() + i] =
          segment_integral(beta, x, params.xi, times_[m] + params.horizon);
    }
  });
}

double PhaseIntegralTable::rescaled(std::size_t m, std::size_t i) const {
  return eps_pow_2n_ * segment(m, i);
}

void require_lattice_direction(const ProbeParams& params, const Grid& grid) {
  if (grid.dim() != params.dim) throw ValidationError("grid and probe dimensions differ");
  if (grid.lattice_index(params.xi) < 0) {
    throw ValidationError("probe direction xi is not a lattice frequency of the grid "
                          "(choose L as a multiple of pi)");
  }
}

ComplexField approx_solution_v(const ProbeParams& params, const AnalyticNonlinearity& g,
                               const PhaseIntegralTable& table, std::size_t m) {
  const Grid& grid = table.grid();
  require_lattice_direction(params, grid);
  const double t = table.times().at(m);
  std::vector<cplx> s(grid.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = packet_value(params, g, t, grid.point(i), table.segment(m, i));
  }
  return ComplexField(grid, std::move(s));
}

ComplexField approx_solution_v(const ProbeParams& params, const AnalyticNonlinearity& g,
                               const BumpCoefficient& beta, double t, const Grid& grid) {
  const PhaseIntegralTable table(params, beta, grid, {t});
  return approx_solution_v(params, g, table, 0);
}

Trajectory ansatz_trajectory(const ProbeParams& params, const AnalyticNonlinearity& g,
                             const BumpCoefficient& beta, const Grid& grid,
                             std::vector<double> times, int workers) {
  const PhaseIntegralTable table(params, beta, grid, times, workers);
  std::vector<ComplexField> fields;
  fields.reserve(times.size());
  for (std::size_t m = 0; m < times.size(); ++m) {
    fields.push_back(approx_solution_v(params, g, table, m));
  }
  return Trajectory(grid, std::move(times), std::move(fields));
}

double delta0_for(const AnalyticNonlinearity& g, double horizon, const RealField& beta) {
  const double bf = fl1_norm(beta);
  if (bf == 0.0) return 0.99 * std::sqrt(g.radius()) / 4.0;
  return delta0(g, horizon, bf);
}

ComplexField initial_data(const ProbeParams& params, const AnalyticNonlinearity& g,
                          const BumpCoefficient& beta, const Grid& grid) {
  ComplexField u0 = approx_solution_v(params, g, beta, -params.horizon, grid);
  const double d0 = delta0_for(g, params.horizon, sample(beta, grid));
  const double f = fl1_norm(u0);
  if (f >= d0) {
    throw ThresholdError("initial data ||u0||_FL1 = " + std::to_string(f) +
                         " >= delta0 = " + std::to_string(d0) +
                         "; outside the well-posedness regime");
  }
  return u0;
}

ComplexField defect_E(const ProbeParams& params, const AnalyticNonlinearity& g,
                      const BumpCoefficient& beta, double t, const Grid& grid) {
  const double T = params.horizon;
  if (!(t > -T && t < T)) throw ValidationError("defect_E needs t inside the open interval (-T, T)");
  const double h = 1e-3 * T;
  const PhaseIntegralTable table(params, beta, grid, {t - 2 * h, t - h, t, t + h, t + 2 * h});
  std::vector<ComplexField> v;
  for (std::size_t m = 0; m < 5; ++m) v.push_back(approx_solution_v(params, g, table, m));

  const ComplexField disp = apply_dispersion(v[2], params.n);
  const ComplexField nl = apply_nonlinearity(g, beta, v[2]);
  std::vector<cplx> e(grid.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    const cplx dt =
        (-v[4].samples[i] + 8.0 * v[3].samples[i] - 8.0 * v[1].samples[i] + v[0].samples[i]) /
        (12.0 * h);
    e[i] = kI * dt + disp.samples[i] / (2.0 * params.n) - nl.samples[i];
  }
  return ComplexField(grid, std::move(e));
}

double derivative_norm(const ProbeParams& params, const AnalyticNonlinearity& g,
                       const BumpCoefficient& beta, int j, const Grid& grid) {
  if (j < 0 || j > 2 * params.n) throw ValidationError("derivative order j must lie in [0, 2n]");
  const double T = params.horizon;
  const double tr = 2.0 * T * std::pow(params.eps, 2.0 * params.n);
  const ComplexField a = ComplexField::from_function(grid, [&](const Point& x) {
    return profile_a(params, g, beta, tr, params.eps * (x + T * params.xi));
  });
  // d/dx' = eps^-1 d/dx under x' = eps (x + T xi); the Wiener norm is
  // invariant under the dilation itself.
  return std::pow(params.eps, -j) * fl1_norm(mixed_derivative_sum(a, j));
}

PowerLawFit derivative_norm_check(const ProbeParams& params, const AnalyticNonlinearity& g,
                                  const BumpCoefficient& beta, int j,
                                  std::span<const double> eps_values, double nyquist_frequency) {
  std::vector<double> norms;
  for (double e : eps_values) {
    ProbeParams pe = params;
    pe.eps = e;
    norms.push_back(derivative_norm(pe, g, beta, j, probe_grid(pe, nyquist_frequency)));
  }
  return fit_power_law(eps_values, norms);
}

}  // namespace nlprobe
