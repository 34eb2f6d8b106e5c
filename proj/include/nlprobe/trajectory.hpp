#pragma once

#include <vector>

#include "nlprobe/grid.hpp"

namespace nlprobe {

/// Fields at strictly increasing time nodes on a common grid.
struct Trajectory {
  Grid grid;
  std::vector<double> times;
  std::vector<ComplexField> fields;

  Trajectory(Grid g, std::vector<double> t, std::vector<ComplexField> f);

  std::size_t size() const { return times.size(); }
  const ComplexField& front() const { return fields.front(); }
  const ComplexField& back() const { return fields.back(); }
  /// Node spacing is constant to 1e-9 relative.
  bool uniform() const;
};

/// Uniform nodes t_m = t0 + m (t1 - t0) / intervals, m = 0..intervals.
std::vector<double> uniform_nodes(double t0, double t1, int intervals);

}  // namespace nlprobe
