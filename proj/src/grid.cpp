#include "nlprobe/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlprobe/errors.hpp"

namespace nlprobe {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, int points_per_axis, double half_length)
    : dim_(dim), n_(points_per_axis), half_length_(half_length) {
  if (dim != 1 && dim != 2) {
    throw ValidationError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (!is_power_of_two(points_per_axis) || points_per_axis < 8) {
    throw ValidationError("grid points per axis must be a power of two >= 8, got " +
                          std::to_string(points_per_axis));
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw ValidationError("grid half-length must be positive and finite");
  }
  size_ = dim == 1 ? static_cast<std::size_t>(n_)
                   : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
}

double Grid::cell_volume() const { return dim_ == 1 ? spacing() : spacing() * spacing(); }

double Grid::frequency_of(int wavenumber) const {
  return std::numbers::pi / half_length_ * wavenumber;
}

std::array<int, 2> Grid::axis_indices(std::size_t flat) const {
  if (dim_ == 1) return {static_cast<int>(flat), 0};
  return {static_cast<int>(flat / n_), static_cast<int>(flat % n_)};
}

std::size_t Grid::index(int i0, int i1) const {
  if (dim_ == 1) return static_cast<std::size_t>(i0);
  return static_cast<std::size_t>(i0) * n_ + static_cast<std::size_t>(i1);
}

Point Grid::point(std::size_t flat) const {
  const auto [i0, i1] = axis_indices(flat);
  if (dim_ == 1) return {coord(i0), 0.0};
  return {coord(i0), coord(i1)};
}

Point Grid::frequency(std::size_t flat) const {
  const auto [i0, i1] = axis_indices(flat);
  if (dim_ == 1) return {frequency_of(wavenumber(i0)), 0.0};
  return {frequency_of(wavenumber(i0)), frequency_of(wavenumber(i1))};
}

double Grid::frequency_norm2(std::size_t flat) const {
  const Point k = frequency(flat);
  return dot(k, k);
}

bool Grid::is_nyquist(std::size_t flat) const {
  const auto [i0, i1] = axis_indices(flat);
  if (i0 == n_ / 2) return true;
  return dim_ == 2 && i1 == n_ / 2;
}

long Grid::lattice_index(const Point& xi, double tol) const {
  std::array<int, 2> idx{0, 0};
  for (int a = 0; a < dim_; ++a) {
    const double k = xi[a] * half_length_ / std::numbers::pi;
    const double kr = std::round(k);
    if (std::abs(k - kr) > tol * std::max(1.0, std::abs(k))) return -1;
    const int wk = static_cast<int>(kr);
    if (wk < -n_ / 2 || wk >= n_ / 2) return -1;
    idx[a] = wk >= 0 ? wk : wk + n_;
  }
  if (dim_ == 1 && xi[1] != 0.0) return -1;
  return static_cast<long>(index(idx[0], idx[1]));
}

ComplexField::ComplexField(Grid g, std::vector<cplx> s) : grid(g), samples(std::move(s)) {
  if (samples.size() != grid.size()) {
    throw ShapeMismatchError("field sample count does not match grid size");
  }
}

ComplexField ComplexField::zeros(const Grid& g) {
  return ComplexField(g, std::vector<cplx>(g.size(), cplx{0.0, 0.0}));
}

ComplexField ComplexField::from_function(const Grid& g,
                                         const std::function<cplx(const Point&)>& f) {
  std::vector<cplx> s(g.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(g.point(i));
  return ComplexField(g, std::move(s));
}

bool ComplexField::all_finite() const {
  for (const auto& z : samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

SpectralField::SpectralField(Grid g, std::vector<cplx> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) {
    throw ShapeMismatchError("spectral coefficient count does not match grid size");
  }
}

RealField::RealField(Grid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ShapeMismatchError("real field size does not match grid size");
  }
}

RealField RealField::from_function(const Grid& g, const std::function<double(const Point&)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(g.point(i));
  return RealField(g, std::move(v));
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw ShapeMismatchError(std::string(what) + ": grids differ");
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "field difference");
  std::vector<cplx> s(a.samples.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.samples[i] - b.samples[i];
  return ComplexField(a.grid, std::move(s));
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "field sum");
  std::vector<cplx> s(a.samples.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.samples[i] + b.samples[i];
  return ComplexField(a.grid, std::move(s));
}

ComplexField operator*(cplx s, const ComplexField& a) {
  std::vector<cplx> out(a.samples.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a.samples[i];
  return ComplexField(a.grid, std::move(out));
}

ComplexField multiply(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid, "field product");
  std::vector<cplx> s(a.samples.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = a.samples[i] * b.samples[i];
  return ComplexField(a.grid, std::move(s));
}

}  // namespace nlprobe
