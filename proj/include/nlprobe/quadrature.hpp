#pragma once

#include <functional>

namespace nlprobe {

/// Adaptive 15-point Gauss-Kronrod quadrature on [a, b]. A panel is accepted
/// when its Kronrod error estimate is below rel_tol |panel| or below abs_tol,
/// so integrands that are numerically zero terminate.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 1e-14);

}  // namespace nlprobe
