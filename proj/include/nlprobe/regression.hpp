#pragma once

#include <cstddef>
#include <span>

namespace nlprobe {

/// Ordinary least squares of log y on log x.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

/// Requires >= 2 points with x, y > 0.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace nlprobe
