#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "ccl/matrix.hpp"

namespace ccl::io {

// Little-endian primitives shared by the binary formats. Values round-trip
// bit-exactly.
void write_u64(std::ostream& os, std::uint64_t v);
void write_f64(std::ostream& os, double v);
std::uint64_t read_u64(std::istream& is);
double read_f64(std::istream& is);

void write_magic(std::ostream& os, std::string_view magic);
// Throws ParseError if the next bytes are not `magic`.
void expect_magic(std::istream& is, std::string_view magic);

// u64 rows, u64 cols, rows*cols float64 row-major.
void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

void write_vector(std::ostream& os, std::span<const double> v);
Vector read_vector(std::istream& is);

}  // namespace ccl::io
