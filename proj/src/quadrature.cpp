#include "nlprobe/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nlprobe {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

double panel(const std::function<double(double)>& f, double a, double b, double rel_tol,
             double abs_tol, int depth) {
  double err = 0.0;
  const double est = Rule::integrate(f, a, b, 0, 0.0, &err);
  // The Kronrod estimate has a floor near machine epsilon times max|f|.
  if (depth >= 30 || err <= std::max(rel_tol * std::abs(est), abs_tol)) return est;
  const double mid = 0.5 * (a + b);
  return panel(f, a, mid, rel_tol, abs_tol, depth + 1) +
         panel(f, mid, b, rel_tol, abs_tol, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  return panel(f, a, b, rel_tol, abs_tol, 0);
}

}  // namespace nlprobe
