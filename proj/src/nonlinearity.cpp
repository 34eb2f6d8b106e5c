#include "nlprobe/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlprobe/errors.hpp"

namespace nlprobe {

AnalyticNonlinearity::AnalyticNonlinearity(std::vector<double> coeffs, double radius)
    : coeffs_(std::move(coeffs)), radius_(radius) {
  if (coeffs_.empty()) throw ValidationError("nonlinearity needs at least one coefficient");
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) {
    throw ValidationError("nonlinearity radius R must be positive and finite");
  }
  bool any_nonzero = false;
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw ValidationError("nonlinearity coefficients must be finite");
    any_nonzero = any_nonzero || a != 0.0;
  }
  if (!any_nonzero) throw ValidationError("nonlinearity coefficients are all zero");
}

AnalyticNonlinearity AnalyticNonlinearity::cubic(double radius) {
  return AnalyticNonlinearity({1.0}, radius);
}

double eval_G(const AnalyticNonlinearity& g, double m) {
  if (!(m < g.radius())) {
    throw DomainError("G evaluated at " + std::to_string(m) + " >= R = " +
                      std::to_string(g.radius()) + "; packets too large for the series");
  }
  // Horner on sum a_k/k! m^k.
  const auto& a = g.coeffs();
  double acc = 0.0;
  for (int k = static_cast<int>(a.size()); k >= 1; --k) {
    acc = acc * m / (k + 1) + a[k - 1];
  }
  return acc * m;
}

MajorantSums majorant_sums(const AnalyticNonlinearity& g) {
  const double q = g.radius() / 4.0;
  double s1 = 0.0, s2 = 0.0, term = 1.0;
  for (int k = 1; k <= g.order(); ++k) {
    term *= q / k;  // q^k / k!
    const double ak = std::abs(g.coeffs()[k - 1]);
    s1 += ak * term;
    s2 += (2.0 * k + 1.0) * ak * term;
  }
  if (!std::isfinite(s1) || !std::isfinite(s2)) throw DomainError("majorant sums diverged");
  return {s1, s2};
}

double delta0(const AnalyticNonlinearity& g, double horizon, double beta_fl1) {
  if (!(horizon > 0.0)) throw DomainError("delta0: horizon T must be positive");
  if (!(beta_fl1 > 0.0)) throw DomainError("delta0: ||beta||_FL1 must be positive");
  const double s2 = majorant_sums(g).s2;
  const double branch = 1.0 / (2.0 * std::sqrt(horizon * beta_fl1 * s2));
  return 0.99 * std::sqrt(g.radius()) / 4.0 * std::min(1.0, branch);
}

BumpCoefficient BumpCoefficient::smooth(double amplitude, double radius, Point center) {
  BumpCoefficient b;
  b.kind = Kind::kSmooth;
  b.amplitude = amplitude;
  b.radius = radius;
  b.center = center;
  b.validate();
  return b;
}

BumpCoefficient BumpCoefficient::truncated_gaussian(double amplitude, double radius, double width,
                                                    Point center) {
  BumpCoefficient b;
  b.kind = Kind::kTruncatedGaussian;
  b.amplitude = amplitude;
  b.radius = radius;
  b.width = width;
  b.center = center;
  b.validate();
  return b;
}

void BumpCoefficient::validate() const {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("beta amplitude must be finite and >= 0");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("beta support radius must be positive");
  }
  if (kind == Kind::kTruncatedGaussian && !(width > 0.0)) {
    throw ValidationError("truncated Gaussian beta needs a positive width");
  }
}

double BumpCoefficient::operator()(const Point& x) const {
  if (amplitude == 0.0) return 0.0;
  const Point dx = x - center;
  const double rho2 = dot(dx, dx) / (radius * radius);
  if (rho2 >= 1.0) return 0.0;
  if (kind == Kind::kSmooth) return amplitude * std::exp(-1.0 / (1.0 - rho2));
  return amplitude * std::exp(-dot(dx, dx) / (2.0 * width * width));
}

double BumpCoefficient::max_value() const {
  return kind == Kind::kSmooth ? amplitude * std::exp(-1.0) : amplitude;
}

RealField sample(const BumpCoefficient& beta, const Grid& grid) {
  return RealField::from_function(grid, [&](const Point& x) { return beta(x); });
}

BumpCoefficient in_direction_frame(const BumpCoefficient& beta, const Point& xi) {
  BumpCoefficient out = beta;
  const Point perp{-xi[1], xi[0]};
  out.center = {dot(xi, beta.center), dot(perp, beta.center)};
  return out;
}

ComplexField apply_nonlinearity(const AnalyticNonlinearity& g, const RealField& beta,
                                const ComplexField& u) {
  require_same_grid(beta.grid, u.grid, "apply_nonlinearity");
  std::vector<cplx> out(u.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = std::norm(u.samples[i]);
    // Domain is checked everywhere, not only where beta is nonzero.
    const double gm = eval_G(g, m);
    out[i] = beta.values[i] * gm * u.samples[i];
  }
  return ComplexField(u.grid, std::move(out));
}

ComplexField apply_nonlinearity(const AnalyticNonlinearity& g, const BumpCoefficient& beta,
                                const ComplexField& u) {
  return apply_nonlinearity(g, sample(beta, u.grid), u);
}

}  // namespace nlprobe
