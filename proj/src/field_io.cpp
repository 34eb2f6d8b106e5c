#include "nlprobe/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "nlprobe/errors.hpp"

namespace nlprobe {

namespace {

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    std::reverse(bytes, bytes + sizeof(T));
    std::memcpy(&v, bytes, sizeof(T));
  }
  return v;
}

template <typename T>
void put(std::ostream& os, T v) {
  v = to_little_endian(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw ValidationError("field file truncated");
  return to_little_endian(v);
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  if (!os) throw ValidationError("cannot open for writing: " + path.string());
  return os;
}

}  // namespace

void write_field(std::ostream& os, const ComplexField& f) {
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.grid.n()));
  put<double>(os, f.grid.half_length());
  for (const auto& z : f.samples) {
    put<double>(os, z.real());
    put<double>(os, z.imag());
  }
}

ComplexField read_field(std::istream& is) {
  const auto d = get<std::uint32_t>(is);
  const auto n = get<std::uint32_t>(is);
  const auto l = get<double>(is);
  const Grid g(static_cast<int>(d), static_cast<int>(n), l);
  std::vector<cplx> s(g.size());
  for (auto& z : s) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    z = {re, im};
  }
  ComplexField f(g, std::move(s));
  if (!f.all_finite()) throw ValidationError("field file contains non-finite samples");
  return f;
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
  auto os = open_out(path, std::ios::binary);
  write_field(os, f);
}

void write_field(const std::filesystem::path& path, const RealField& f) {
  std::vector<cplx> s(f.values.begin(), f.values.end());
  write_field(path, ComplexField(f.grid, std::move(s)));
}

ComplexField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ValidationError("cannot open field file: " + path.string());
  return read_field(is);
}

void write_field_csv(std::ostream& os, const ComplexField& f) {
  os << (f.grid.dim() == 1 ? "x,re,im\n" : "x,y,re,im\n");
  os << std::setprecision(17);
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const Point p = f.grid.point(i);
    os << p[0] << ',';
    if (f.grid.dim() == 2) os << p[1] << ',';
    os << f.samples[i].real() << ',' << f.samples[i].imag() << '\n';
  }
}

void write_field_csv(const std::filesystem::path& path, const ComplexField& f) {
  auto os = open_out(path, std::ios::out);
  write_field_csv(os, f);
}

void write_pgm(const std::filesystem::path& path, const RealField& f, double lo, double hi) {
  if (f.grid.dim() != 2) throw ValidationError("PGM output needs a 2D field");
  auto os = open_out(path, std::ios::binary);
  const int n = f.grid.n();
  os << "P5\n" << n << ' ' << n << "\n255\n";
  const double span = hi > lo ? hi - lo : 1.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double t = std::clamp((f.values[i] - lo) / span, 0.0, 1.0);
    os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * t))));
  }
}

}  // namespace nlprobe
