#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace nlprobe {

using cplx = std::complex<double>;

/// A point (or direction) in R^d, d <= 2. Unused trailing components are 0.
using Point = std::array<double, 2>;

inline double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator+(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Point operator-(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Point operator*(double s, const Point& a) { return {s * a[0], s * a[1]}; }

/// Periodic box [-L, L)^d sampled with N points per axis.
///
/// Physical samples sit at x_j = -L + j h, h = 2L/N. Frequencies use the
/// FFT ordering: index k in [0, N) maps to the signed wavenumber
/// k < N/2 ? k : k - N and to the angular frequency (pi/L) * wavenumber.
class Grid {
 public:
  Grid(int dim, int points_per_axis, double half_length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double spacing() const { return 2.0 * half_length_ / n_; }
  double cell_volume() const;
  std::size_t size() const { return size_; }

  double coord(int i) const { return -half_length_ + i * spacing(); }
  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  double frequency_of(int wavenumber) const;

  Point point(std::size_t flat) const;
  Point frequency(std::size_t flat) const;
  double frequency_norm2(std::size_t flat) const;
  /// True if any axis index of `flat` is the unpaired index -N/2.
  bool is_nyquist(std::size_t flat) const;

  std::size_t index(int i0, int i1 = 0) const;
  std::array<int, 2> axis_indices(std::size_t flat) const;

  /// Flat index of the lattice frequency equal to `xi`, or -1 when `xi`
  /// is not exactly representable.
  long lattice_index(const Point& xi, double tol = 1e-12) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.half_length_ == b.half_length_;
  }

 private:
  int dim_;
  int n_;
  double half_length_;
  std::size_t size_;
};

/// Complex samples on the physical lattice of a grid.
struct ComplexField {
  Grid grid;
  std::vector<cplx> samples;

  ComplexField(Grid g, std::vector<cplx> s);

  static ComplexField zeros(const Grid& g);
  static ComplexField from_function(const Grid& g, const std::function<cplx(const Point&)>& f);

  bool all_finite() const;
};

/// Fourier-series coefficients c_k with u(x) = sum_k c_k exp(i freq(k) . x),
/// stored in FFT order.
struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;

  SpectralField(Grid g, std::vector<cplx> c);
};

struct RealField {
  Grid grid;
  std::vector<double> values;

  RealField(Grid g, std::vector<double> v);

  static RealField from_function(const Grid& g, const std::function<double(const Point&)>& f);
};

ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx s, const ComplexField& a);
/// Pointwise product.
ComplexField multiply(const ComplexField& a, const ComplexField& b);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace nlprobe
