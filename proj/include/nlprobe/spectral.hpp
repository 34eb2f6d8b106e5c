#pragma once

#include "nlprobe/grid.hpp"

namespace nlprobe {

SpectralField forward_dft(const ComplexField& f);
ComplexField inverse_dft(const SpectralField& c);

/// Wiener norm sum_k |c_k|: the torus stand-in for the FL^1 norm. It is
/// exactly submultiplicative and dominates the sup norm.
double fl1_norm(const ComplexField& f);
double fl1_norm(const SpectralField& c);
double fl1_norm(const RealField& f);

/// (sum_k (1 + |freq(k)|^2)^s |c_k|^2)^(1/2).
double sobolev_norm(const ComplexField& f, double s);

double linf_norm(const ComplexField& f);

/// l2 norm of the coefficient sequence, (sum_k |c_k|^2)^(1/2).
double coefficient_l2_norm(const SpectralField& c);

/// Discrete mass h^d * sum_x |u(x)|^2.
double mass(const ComplexField& f);

/// Fraction of sum |c_k|^2 carried by the unpaired -N/2 modes.
double nyquist_fraction(const ComplexField& f);

/// exp(i t (-Delta)^n / 2n) applied spectrally.
ComplexField free_propagate(const ComplexField& f, double t, int n);
SpectralField free_propagate(const SpectralField& c, double t, int n);

/// (-Delta)^n applied spectrally.
ComplexField apply_dispersion(const ComplexField& f, int n);

/// d^order / dx_axis^order applied spectrally.
ComplexField spectral_derivative(const ComplexField& f, int axis, int order);

/// |freq(k)|^(2n) / (2n) for every coefficient index.
std::vector<double> dispersion_symbol(const Grid& g, int n);

}  // namespace nlprobe
