#pragma once

#include <memory>
#include <span>
#include <vector>

#include "nlprobe/grid.hpp"

namespace nlprobe {

/// Unnormalized FFTW transforms for one grid shape, plus the sign pattern
/// that accounts for the box starting at -L instead of 0.
///
/// Plans are created once per (d, N) and shared; execution is thread-safe.
class DftEngine {
 public:
  static const DftEngine& for_grid(const Grid& g);

  /// samples -> series coefficients (normalized per the grid convention).
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// series coefficients -> samples.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  /// Plain unnormalized DFTs (sign -1 forward, +1 backward), no box shift.
  void forward_raw(std::span<const cplx> in, std::span<cplx> out) const;
  void backward_raw(std::span<const cplx> in, std::span<cplx> out) const;

  struct Plans;

 private:
  explicit DftEngine(const Grid& g);

  Grid grid_;
  std::vector<double> sign_;
  std::shared_ptr<Plans> plans_;
};

}  // namespace nlprobe
