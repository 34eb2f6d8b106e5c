#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "nlprobe/grid.hpp"

namespace testing {

using nlprobe::cplx;
using nlprobe::Grid;
using nlprobe::Point;

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Smooth random field: a few random low modes plus a random Gaussian bump.
inline nlprobe::ComplexField random_field(const Grid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double pi = 3.141592653589793;
  const int modes = 4;
  std::vector<std::array<double, 5>> terms;
  for (int m = 0; m < modes; ++m) {
    terms.push_back({u(rng), u(rng), std::round(4.0 * u(rng)), std::round(4.0 * u(rng)), 0.0});
  }
  const double cx = u(rng) * g.half_length() / 2.0, w = 0.5 + std::abs(u(rng));
  const double amp = u(rng);
  return nlprobe::ComplexField::from_function(g, [&](const Point& x) {
    cplx s{0.0, 0.0};
    for (const auto& t : terms) {
      const double ph = pi / g.half_length() * (t[2] * x[0] + (g.dim() == 2 ? t[3] * x[1] : 0.0));
      s += cplx(t[0], t[1]) * std::polar(1.0, ph);
    }
    const double r2 = (x[0] - cx) * (x[0] - cx) + (g.dim() == 2 ? x[1] * x[1] : 0.0);
    return s + amp * std::exp(-r2 / (2.0 * w * w));
  });
}

}  // namespace testing
