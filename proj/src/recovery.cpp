#include "nlprobe/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "nlprobe/dft.hpp"
#include "nlprobe/errors.hpp"
#include "nlprobe/parallel.hpp"

namespace nlprobe {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t count_mask(const std::vector<std::uint8_t>& mask) {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double offset_of(const Point& x, const Point& xi, int dim) {
  return dim == 1 ? x[0] : dot(x, perpendicular(xi));
}

void require_unit(const Point& xi, const char* what) {
  if (!(std::abs(norm(xi) - 1.0) < 1e-12)) {
    throw ValidationError(std::string(what) + ": direction must be a unit vector");
  }
}

Point transported(const ProbeParams& params, const Point& x) {
  return params.eps * (x + 3.0 * params.horizon * params.xi);
}

PhaseSamples phase_from_ratio(std::vector<Point> points, const std::vector<cplx>& ratio,
                              const std::vector<double>& modulus, const ProbeParams& params,
                              double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ValidationError("extract_phase: threshold must lie in (0, 1)");
  }
  PhaseSamples out;
  out.points = std::move(points);
  out.theta.assign(out.points.size(), 0.0);
  out.modulus = modulus;
  out.mask.assign(out.points.size(), 0);
  const double cut = threshold * params.a0.max_abs();
  double worst = 0.0;
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    if (std::abs(params.a0(transported(params, out.points[i]))) < cut) continue;
    out.mask[i] = 1;
    out.theta[i] = -std::arg(ratio[i]);
    worst = std::max(worst, std::abs(out.theta[i]));
  }
  if (count_mask(out.mask) == 0) {
    throw EmptyMaskError("extract_phase: threshold " + std::to_string(threshold) +
                         " masks out every sample");
  }
  if (!(worst < kPi / 2.0)) {
    throw DomainError("extract_phase: |theta| reaches " + std::to_string(worst) +
                      " >= pi/2; eps too large for unwrapped phase recovery");
  }
  return out;
}

}  // namespace

std::size_t SinogramRow::masked_count() const { return count_mask(mask); }

std::size_t Sinogram::masked_count() const {
  std::size_t c = 0;
  for (const auto& r : rows) c += r.masked_count();
  return c;
}

SinogramRow xray_forward(const BumpCoefficient& beta, const Point& xi, std::vector<Point> points,
                         int dim) {
  require_unit(xi, "xray_forward");
  SinogramRow row;
  row.direction = xi;
  row.points = std::move(points);
  for (const auto& x : row.points) {
    // Start well behind the support ball so the segment covers the whole chord.
    const double reach = norm(x - beta.center) + beta.radius + 1.0;
    row.offsets.push_back(offset_of(x, xi, dim));
    row.values.push_back(segment_integral(beta, x - reach * xi, xi, 2.0 * reach));
    row.mask.push_back(1);
  }
  return row;
}

Sinogram xray_forward_sinogram(const BumpCoefficient& beta, int count, int offsets,
                               double half_width, double horizon, int workers) {
  if (count < 1 || offsets < 2 || !(half_width > 0.0)) {
    throw ValidationError("xray_forward_sinogram: need count >= 1, offsets >= 2, half_width > 0");
  }
  Sinogram sino;
  sino.dim = 2;
  sino.rows.resize(static_cast<std::size_t>(count));
  const double ds = 2.0 * half_width / offsets;
  parallel_for(sino.rows.size(), workers, [&](std::size_t i) {
    const Point xi = unit_direction(kPi * static_cast<double>(i) / count);
    std::vector<Point> pts;
    for (int j = 0; j < offsets; ++j) {
      pts.push_back(-horizon * xi + (-half_width + j * ds) * perpendicular(xi));
    }
    sino.rows[i] = xray_forward(beta, xi, std::move(pts));
  });
  return sino;
}

PhaseSamples extract_phase(const ComplexField& u_final, const ProbeParams& params,
                           double threshold) {
  const Grid& g = u_final.grid;
  std::vector<Point> pts(g.size());
  std::vector<cplx> ratio(g.size());
  std::vector<double> modulus(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    pts[i] = g.point(i);
    const double carrier = dot(pts[i], params.xi) + params.horizon / (2.0 * params.n);
    ratio[i] = u_final.samples[i] * std::polar(1.0, -carrier);
    modulus[i] = std::abs(u_final.samples[i]);
  }
  return phase_from_ratio(std::move(pts), ratio, modulus, params, threshold);
}

PhaseSamples extract_phase(const ComplexField& u_final, const ComplexField& reference,
                           const ProbeParams& params, double threshold) {
  require_same_grid(u_final.grid, reference.grid, "extract_phase");
  const Grid& g = u_final.grid;
  std::vector<Point> pts(g.size());
  std::vector<cplx> ratio(g.size());
  std::vector<double> modulus(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    pts[i] = g.point(i);
    ratio[i] = u_final.samples[i] * std::conj(reference.samples[i]);
    modulus[i] = std::abs(u_final.samples[i]);
  }
  return phase_from_ratio(std::move(pts), ratio, modulus, params, threshold);
}

PhaseSamples extract_phase(const std::vector<Point>& points, const std::vector<cplx>& u_final,
                           const ProbeParams& params, double threshold) {
  if (points.size() != u_final.size()) {
    throw ShapeMismatchError("extract_phase: point and value counts differ");
  }
  std::vector<cplx> ratio(points.size());
  std::vector<double> modulus(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double carrier = dot(points[i], params.xi) + params.horizon / (2.0 * params.n);
    ratio[i] = u_final[i] * std::polar(1.0, -carrier);
    modulus[i] = std::abs(u_final[i]);
  }
  return phase_from_ratio(points, ratio, modulus, params, threshold);
}

SinogramRow line_integrals_from_phase(const PhaseSamples& phase, const ProbeParams& params,
                                      const AnalyticNonlinearity& g, double cell,
                                      AmplitudeSource source) {
  SinogramRow row;
  row.direction = params.xi;
  const double amp = std::pow(params.eps, params.p);
  const double band = cell > 0.0 ? 0.5 * cell * (1.0 + 1e-9) : 1e-9 * params.horizon;
  for (std::size_t i = 0; i < phase.points.size(); ++i) {
    const Point& x = phase.points[i];
    if (std::abs(dot(x, params.xi) + params.horizon) > band) continue;
    row.points.push_back(x);
    row.offsets.push_back(offset_of(x, params.xi, params.dim));
    if (!phase.mask[i]) {
      row.values.push_back(0.0);
      row.mask.push_back(0);
      continue;
    }
    double m = 0.0;
    if (source == AmplitudeSource::kAnalytic) {
      const double a = amp * params.a0(transported(params, x));
      m = a * a;
    } else {
      m = phase.modulus[i] * phase.modulus[i];
    }
    const double gm = eval_G(g, m);
    if (gm == 0.0) {
      row.values.push_back(0.0);
      row.mask.push_back(0);
      continue;
    }
    row.values.push_back(phase.theta[i] / gm);
    row.mask.push_back(1);
  }
  if (row.points.empty()) {
    throw EmptyMaskError("line_integrals_from_phase: no samples on the hyperplane x.xi = -T");
  }
  // Keep offsets ascending so FBP can treat them as a uniform axis.
  std::vector<std::size_t> order(row.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return row.offsets[a] < row.offsets[b]; });
  SinogramRow sorted;
  sorted.direction = row.direction;
  for (auto k : order) {
    sorted.points.push_back(row.points[k]);
    sorted.offsets.push_back(row.offsets[k]);
    sorted.values.push_back(row.values[k]);
    sorted.mask.push_back(row.mask[k]);
  }
  return sorted;
}

double recover_integral_1d(const Sinogram& sino) {
  if (sino.dim != 1) throw ValidationError("recover_integral_1d: sinogram is not 1D");
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : sino.rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!r.mask[j]) continue;
      sum += r.values[j];
      ++count;
    }
  }
  if (count == 0) throw EmptyMaskError("recover_integral_1d: no masked samples");
  return sum / static_cast<double>(count);
}

FbpResult fbp_invert(const Sinogram& sino, const Grid& out_grid) {
  if (sino.dim != 2 || out_grid.dim() != 2) throw ValidationError("fbp_invert: needs 2D input");
  const std::size_t k_dirs = sino.rows.size();
  if (k_dirs < 16) {
    throw ValidationError("fbp_invert: insufficient directions (" + std::to_string(k_dirs) +
                          " < 16)");
  }

  struct Filtered {
    Point normal;
    double s0, ds;
    std::vector<double> q;
  };
  std::vector<Filtered> rows;
  rows.reserve(k_dirs);
  for (const auto& r : sino.rows) {
    require_unit(r.direction, "fbp_invert");
    const std::size_t p = r.size();
    if (p < 2) throw ValidationError("fbp_invert: a row needs at least two offsets");
    const double ds = r.offsets[1] - r.offsets[0];
    if (!(ds > 0.0)) throw ValidationError("fbp_invert: offsets must increase");
    for (std::size_t j = 1; j < p; ++j) {
      if (std::abs(r.offsets[j] - r.offsets[j - 1] - ds) > 1e-9 * ds) {
        throw ValidationError("fbp_invert: offsets must be uniform");
      }
    }

    int npad = 8;
    while (static_cast<std::size_t>(npad) < 2 * p) npad *= 2;
    const auto& dft = DftEngine::for_grid(Grid(1, npad, 1.0));
    std::vector<cplx> kernel(npad, cplx{0.0, 0.0}), data(npad, cplx{0.0, 0.0});
    for (int k = 0; k < npad; ++k) {
      const int m = k < npad / 2 ? k : k - npad;
      if (m == 0) {
        kernel[k] = 1.0 / (4.0 * ds * ds);
      } else if (m % 2 != 0) {
        kernel[k] = -1.0 / (kPi * kPi * m * m * ds * ds);
      }
    }
    for (std::size_t j = 0; j < p; ++j) data[j] = r.mask[j] ? r.values[j] : 0.0;
    std::vector<cplx> kh(npad), dh(npad), out(npad);
    dft.forward_raw(kernel, kh);
    dft.forward_raw(data, dh);
    for (int k = 0; k < npad; ++k) {
      const int m = k < npad / 2 ? k : k - npad;
      const double hann = 0.5 * (1.0 + std::cos(2.0 * kPi * m / npad));
      dh[k] *= kh[k].real() * hann;
    }
    dft.backward_raw(dh, out);
    Filtered f{perpendicular(r.direction), r.offsets[0], ds, std::vector<double>(p)};
    for (std::size_t j = 0; j < p; ++j) f.q[j] = out[j].real() * ds / npad;
    rows.push_back(std::move(f));
  }

  RealField unclamped{out_grid, std::vector<double>(out_grid.size(), 0.0)};
  const double weight = kPi / static_cast<double>(k_dirs);
  for (std::size_t i = 0; i < out_grid.size(); ++i) {
    const Point x = out_grid.point(i);
    double acc = 0.0;
    for (const auto& f : rows) {
      const double u = (dot(x, f.normal) - f.s0) / f.ds;
      const double fl = std::floor(u);
      const auto j = static_cast<long>(fl);
      if (j < 0 || j + 1 >= static_cast<long>(f.q.size())) continue;
      const double w = u - fl;
      acc += (1.0 - w) * f.q[j] + w * f.q[j + 1];
    }
    unclamped.values[i] = weight * acc;
  }

  FbpResult res{unclamped, unclamped, 0.0, 0.0};
  double neg = 0.0, total = 0.0;
  for (auto& v : res.clamped.values) {
    total += std::abs(v);
    if (v < 0.0) {
      neg += -v;
      res.min_value = std::min(res.min_value, v);
      v = 0.0;
    }
  }
  res.negative_fraction = total > 0.0 ? neg / total : 0.0;
  return res;
}

double relative_l2_error(const RealField& a, const RealField& b) {
  require_same_grid(a.grid, b.grid, "relative_l2_error");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
    den += b.values[i] * b.values[i];
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : INFINITY;
  return std::sqrt(num / den);
}

void write_sinogram_csv(std::ostream& os, const Sinogram& sino) {
  os << "angle,offset,value,mask\n";
  os.precision(17);
  for (const auto& r : sino.rows) {
    const double a = direction_angle(r.direction);
    for (std::size_t j = 0; j < r.size(); ++j) {
      os << a << ',' << r.offsets[j] << ',' << r.values[j] << ',' << int(r.mask[j]) << '\n';
    }
  }
}

void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sino) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  write_sinogram_csv(os, sino);
}

Sinogram read_sinogram_csv(std::istream& is, int dim) {
  Sinogram sino;
  sino.dim = dim;
  std::string line;
  if (!std::getline(is, line) || line.rfind("angle,offset,value,mask", 0) != 0) {
    throw ValidationError("sinogram CSV: missing header angle,offset,value,mask");
  }
  std::size_t lineno = 1;
  double current = std::nan("");
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    double angle, offset, value;
    int mask;
    char c1, c2, c3;
    if (!(ls >> angle >> c1 >> offset >> c2 >> value >> c3 >> mask) || c1 != ',' || c2 != ',' ||
        c3 != ',') {
      throw ValidationError("sinogram CSV: malformed line " + std::to_string(lineno));
    }
    const Point xi = unit_direction(angle);
    if (sino.rows.empty() || angle != current) {
      current = angle;
      sino.rows.push_back(SinogramRow{});
      sino.rows.back().direction = xi;
    }
    auto& r = sino.rows.back();
    r.offsets.push_back(offset);
    r.points.push_back(dim == 1 ? Point{offset, 0.0} : offset * perpendicular(xi));
    r.values.push_back(mask ? value : 0.0);
    r.mask.push_back(mask ? 1 : 0);
  }
  return sino;
}

Sinogram read_sinogram_csv(const std::filesystem::path& path, int dim) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path.string());
  return read_sinogram_csv(is, dim);
}

void write_sinogram_pgm(const std::filesystem::path& path, const Sinogram& sino) {
  std::size_t width = 0;
  double hi = 0.0;
  for (const auto& r : sino.rows) {
    width = std::max(width, r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r.mask[j]) hi = std::max(hi, r.values[j]);
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open " + path.string() + " for writing");
  os << "P5\n" << width << ' ' << sino.rows.size() << "\n255\n";
  for (const auto& r : sino.rows) {
    for (std::size_t j = 0; j < width; ++j) {
      double t = 0.0;
      if (j < r.size() && r.mask[j] && hi > 0.0) t = std::clamp(r.values[j] / hi, 0.0, 1.0);
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
    }
  }
}

}  // namespace nlprobe
