#pragma once

#include <filesystem>
#include <iosfwd>

#include "rfis/complex.hpp"

namespace rfis {

// Text mesh format:
//   CPLX <n> <NV> <NS>
//   NV lines of n coordinates (17 significant digits)
//   NS lines of n 0-based vertex ids in orientation order
//   CENTER
//   n coordinates

void write_cplx(std::ostream& out, const BoundaryComplex& c);
BoundaryComplex read_cplx(std::istream& in);

void save_cplx(const std::filesystem::path& path, const BoundaryComplex& c);
BoundaryComplex load_cplx(const std::filesystem::path& path);

}  // namespace rfis
