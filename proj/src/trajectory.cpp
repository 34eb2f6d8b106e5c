#include "nlprobe/trajectory.hpp"

#include <cmath>

#include "nlprobe/errors.hpp"

namespace nlprobe {

Trajectory::Trajectory(Grid g, std::vector<double> t, std::vector<ComplexField> f)
    : grid(g), times(std::move(t)), fields(std::move(f)) {
  if (times.empty() || times.size() != fields.size()) {
    throw ShapeMismatchError("trajectory needs one field per time node");
  }
  for (std::size_t m = 1; m < times.size(); ++m) {
    if (!(times[m] > times[m - 1])) throw ValidationError("trajectory times must increase strictly");
  }
  for (const auto& field : fields) require_same_grid(grid, field.grid, "trajectory");
}

bool Trajectory::uniform() const {
  if (times.size() < 3) return true;
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t m = 1; m < times.size(); ++m) {
    if (std::abs(times[m] - times[m - 1] - step) > 1e-9 * std::abs(step)) return false;
  }
  return true;
}

std::vector<double> uniform_nodes(double t0, double t1, int intervals) {
  if (intervals < 1) throw ValidationError("need at least one time interval");
  std::vector<double> t(static_cast<std::size_t>(intervals) + 1);
  for (int m = 0; m <= intervals; ++m) {
    t[m] = m == intervals ? t1 : t0 + (t1 - t0) * static_cast<double>(m) / intervals;
  }
  return t;
}

}  // namespace nlprobe
