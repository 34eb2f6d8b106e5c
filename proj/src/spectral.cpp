#include "nlprobe/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "nlprobe/dft.hpp"
#include "nlprobe/errors.hpp"

namespace nlprobe {

SpectralField forward_dft(const ComplexField& f) {
  std::vector<cplx> c(f.grid.size());
  DftEngine::for_grid(f.grid).forward(f.samples, c);
  return SpectralField(f.grid, std::move(c));
}

ComplexField inverse_dft(const SpectralField& c) {
  std::vector<cplx> s(c.grid.size());
  DftEngine::for_grid(c.grid).inverse(c.coeffs, s);
  return ComplexField(c.grid, std::move(s));
}

double fl1_norm(const SpectralField& c) {
  double sum = 0.0;
  for (const auto& z : c.coeffs) sum += std::abs(z);
  return sum;
}

double fl1_norm(const ComplexField& f) { return fl1_norm(forward_dft(f)); }

double fl1_norm(const RealField& f) {
  std::vector<cplx> s(f.values.begin(), f.values.end());
  return fl1_norm(ComplexField(f.grid, std::move(s)));
}

double sobolev_norm(const ComplexField& f, double s) {
  if (s < 0.0) throw ValidationError("sobolev_norm: s must be nonnegative");
  const SpectralField c = forward_dft(f);
  double sum = 0.0;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    sum += std::pow(1.0 + c.grid.frequency_norm2(k), s) * std::norm(c.coeffs[k]);
  }
  return std::sqrt(sum);
}

double linf_norm(const ComplexField& f) {
  double m = 0.0;
  for (const auto& z : f.samples) m = std::max(m, std::abs(z));
  return m;
}

double coefficient_l2_norm(const SpectralField& c) {
  double sum = 0.0;
  for (const auto& z : c.coeffs) sum += std::norm(z);
  return std::sqrt(sum);
}

double mass(const ComplexField& f) {
  double sum = 0.0;
  for (const auto& z : f.samples) sum += std::norm(z);
  return sum * f.grid.cell_volume();
}

double nyquist_fraction(const ComplexField& f) {
  const SpectralField c = forward_dft(f);
  double total = 0.0, nyq = 0.0;
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    const double m = std::norm(c.coeffs[k]);
    total += m;
    if (c.grid.is_nyquist(k)) nyq += m;
  }
  return total > 0.0 ? nyq / total : 0.0;
}

std::vector<double> dispersion_symbol(const Grid& g, int n) {
  if (n < 1) throw ValidationError("dispersion order n must be >= 1");
  std::vector<double> sym(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    sym[k] = std::pow(g.frequency_norm2(k), n) / (2.0 * n);
  }
  return sym;
}

SpectralField free_propagate(const SpectralField& c, double t, int n) {
  const std::vector<double> sym = dispersion_symbol(c.grid, n);
  std::vector<cplx> out(c.coeffs.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = c.coeffs[k] * std::polar(1.0, t * sym[k]);
  }
  return SpectralField(c.grid, std::move(out));
}

ComplexField free_propagate(const ComplexField& f, double t, int n) {
  if (t == 0.0) return f;
  return inverse_dft(free_propagate(forward_dft(f), t, n));
}

ComplexField apply_dispersion(const ComplexField& f, int n) {
  if (n < 1) throw ValidationError("dispersion order n must be >= 1");
  SpectralField c = forward_dft(f);
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    c.coeffs[k] *= std::pow(c.grid.frequency_norm2(k), n);
  }
  return inverse_dft(c);
}

ComplexField spectral_derivative(const ComplexField& f, int axis, int order) {
  if (axis < 0 || axis >= f.grid.dim()) throw ValidationError("spectral_derivative: bad axis");
  if (order < 0) throw ValidationError("spectral_derivative: negative order");
  if (order == 0) return f;
  SpectralField c = forward_dft(f);
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    const double w = c.grid.frequency(k)[axis];
    c.coeffs[k] *= std::pow(cplx{0.0, w}, order);
  }
  return inverse_dft(c);
}

}  // namespace nlprobe
