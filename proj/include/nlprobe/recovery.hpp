#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "nlprobe/ansatz.hpp"
#include "nlprobe/grid.hpp"
#include "nlprobe/nonlinearity.hpp"

namespace nlprobe {

/// Line-integral samples for one direction xi. In 2D the offset of a sample
/// point x is its transverse coordinate x . xi_perp with xi_perp = (-xi2, xi1);
/// in 1D it is the coordinate x itself.
struct SinogramRow {
  Point direction{1.0, 0.0};
  std::vector<Point> points;
  std::vector<double> offsets;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;

  std::size_t size() const { return values.size(); }
  std::size_t masked_count() const;
};

struct Sinogram {
  int dim = 2;
  std::vector<SinogramRow> rows;

  std::size_t masked_count() const;
};

inline Point perpendicular(const Point& xi) { return {-xi[1], xi[0]}; }
inline double direction_angle(const Point& xi) { return std::atan2(xi[1], xi[0]); }
inline Point unit_direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// int_R beta(x + t xi) dt at each point, adaptive quadrature on the chord
/// through the support ball. Every sample is valid.
SinogramRow xray_forward(const BumpCoefficient& beta, const Point& xi, std::vector<Point> points,
                         int dim = 2);

/// Full sinogram for `count` directions with angles a_i = pi i / count and
/// uniform offsets s_j = -half_width + j (2 half_width / offsets), sampled on
/// the hyperplane x . xi = -T.
Sinogram xray_forward_sinogram(const BumpCoefficient& beta, int count, int offsets,
                               double half_width, double horizon, int workers = 1);

/// Phase samples at arbitrary points, with the mask and the measured |u|.
struct PhaseSamples {
  std::vector<Point> points;
  std::vector<double> theta;
  std::vector<double> modulus;
  std::vector<std::uint8_t> mask;
};

/// theta(x) = -arg(u(T, x) conj(ref(x))) where ref is the unit carrier
/// e^{i(x.xi + T/2n)} unless an explicit reference field is given (for
/// solved fields, the linear flow of the same initial data). Samples with
/// |a0(eps(x + 3T xi))| < threshold max|a0| are masked out.
///
/// Throws EmptyMaskError when nothing survives, DomainError when a masked
/// phase reaches pi/2.
PhaseSamples extract_phase(const ComplexField& u_final, const ProbeParams& params,
                           double threshold);
PhaseSamples extract_phase(const ComplexField& u_final, const ComplexField& reference,
                           const ProbeParams& params, double threshold);
/// Same, for values already evaluated at `points` (no reference).
PhaseSamples extract_phase(const std::vector<Point>& points, const std::vector<cplx>& u_final,
                           const ProbeParams& params, double threshold);

enum class AmplitudeSource { kAnalytic, kMeasured };

/// X(x, xi) ~ theta(x) / G(eps^(2p) |a0(eps(x + 3T xi))|^2) at samples on the
/// hyperplane x . xi = -T (within half a grid cell when `cell` > 0). With
/// kMeasured the divisor is G(|u(T, x)|^2) instead.
SinogramRow line_integrals_from_phase(const PhaseSamples& phase, const ProbeParams& params,
                                      const AnalyticNonlinearity& g, double cell = 0.0,
                                      AmplitudeSource source = AmplitudeSource::kAnalytic);

/// Mean of all masked values of a 1D sinogram.
double recover_integral_1d(const Sinogram& sino);

struct FbpResult {
  RealField clamped;
  RealField unclamped;
  /// Most negative value before clamping (0 when none).
  double min_value = 0.0;
  /// Fraction of the L1 mass of the unclamped field carried by negative values.
  double negative_fraction = 0.0;
};

/// Ram-Lak filtered backprojection with Hann apodization (cutoff at the
/// offset Nyquist frequency), linear interpolation in the offset and the
/// weight pi / K over K directions. Rows need uniform offsets; masked-out
/// samples count as zero.
FbpResult fbp_invert(const Sinogram& sino, const Grid& out_grid);

/// ||a - b||_2 / ||b||_2 over the grid.
double relative_l2_error(const RealField& a, const RealField& b);

/// CSV with header angle,offset,value,mask (one line per sample).
void write_sinogram_csv(std::ostream& os, const Sinogram& sino);
void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sino);
/// Inverse of write_sinogram_csv; rows are grouped by consecutive angle.
Sinogram read_sinogram_csv(std::istream& is, int dim = 2);
Sinogram read_sinogram_csv(const std::filesystem::path& path, int dim = 2);

/// Rows as image lines (offsets along x); masked-out samples are black.
void write_sinogram_pgm(const std::filesystem::path& path, const Sinogram& sino);

}  // namespace nlprobe
