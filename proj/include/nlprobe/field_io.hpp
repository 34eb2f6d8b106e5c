#pragma once

#include <filesystem>
#include <iosfwd>

#include "nlprobe/grid.hpp"

namespace nlprobe {

// Binary field layout (all little-endian):
//   uint32 d | uint32 N | float64 L | N^d x (float64 re, float64 im)
// Samples follow the grid's flat order (axis 0 slowest).

void write_field(std::ostream& os, const ComplexField& f);
ComplexField read_field(std::istream& is);

void write_field(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_field(const std::filesystem::path& path);

/// Real fields are stored in the same layout with zero imaginary parts.
void write_field(const std::filesystem::path& path, const RealField& f);

/// CSV with header `x,re,im` (d = 1) or `x,y,re,im` (d = 2).
void write_field_csv(std::ostream& os, const ComplexField& f);
void write_field_csv(const std::filesystem::path& path, const ComplexField& f);

/// Binary PGM (P5), 8-bit, rows = axis 0, linearly mapped from [lo, hi].
void write_pgm(const std::filesystem::path& path, const RealField& f, double lo, double hi);

}  // namespace nlprobe
