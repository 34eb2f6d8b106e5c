#pragma once

#include <vector>

#include "nlprobe/grid.hpp"

namespace nlprobe {

/// G(x) = sum_{k=1..K} a_k / k! x^k, trusted for |x| < R.
class AnalyticNonlinearity {
 public:
  AnalyticNonlinearity(std::vector<double> coeffs, double radius);

  /// G(x) = x, the cubic NLS case.
  static AnalyticNonlinearity cubic(double radius = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  double radius() const { return radius_; }
  int order() const { return static_cast<int>(coeffs_.size()); }

 private:
  std::vector<double> coeffs_;
  double radius_;
};

/// Throws DomainError when m >= R.
double eval_G(const AnalyticNonlinearity& g, double m);

struct MajorantSums {
  double s1;  // sum |a_k|/k! (R/4)^k
  double s2;  // sum (2k+1)|a_k|/k! (R/4)^k
};

MajorantSums majorant_sums(const AnalyticNonlinearity& g);

/// Smallness threshold on ||u0||_FL1 below which the Duhamel map contracts:
/// 0.99 * (sqrt(R)/4) * min(1, 1 / (2 sqrt(T ||beta||_FL1 S2))).
double delta0(const AnalyticNonlinearity& g, double horizon, double beta_fl1);

/// The localized coefficient beta: nonnegative, compactly supported in the
/// ball |x - center| < radius.
struct BumpCoefficient {
  enum class Kind { kSmooth, kTruncatedGaussian };

  Kind kind = Kind::kSmooth;
  double amplitude = 0.0;
  double radius = 1.0;
  Point center{0.0, 0.0};
  /// Standard deviation for the truncated Gaussian kind.
  double width = 0.25;

  static BumpCoefficient smooth(double amplitude, double radius, Point center = {0.0, 0.0});
  static BumpCoefficient truncated_gaussian(double amplitude, double radius, double width,
                                            Point center = {0.0, 0.0});
  static BumpCoefficient zero() { return smooth(0.0, 1.0); }

  double operator()(const Point& x) const;
  bool is_zero() const { return amplitude == 0.0; }
  double max_value() const;
  void validate() const;
};

/// Analytic beta at the grid points.
RealField sample(const BumpCoefficient& beta, const Grid& grid);

/// The same bump seen from a frame whose first axis points along `xi`
/// (2D rotation; identity in 1D with xi = +1).
BumpCoefficient in_direction_frame(const BumpCoefficient& beta, const Point& xi);

/// beta(x) G(|u(x)|^2) u(x), pointwise.
ComplexField apply_nonlinearity(const AnalyticNonlinearity& g, const RealField& beta,
                                const ComplexField& u);
ComplexField apply_nonlinearity(const AnalyticNonlinearity& g, const BumpCoefficient& beta,
                                const ComplexField& u);

}  // namespace nlprobe
