#include "ccl/matrix_io.hpp"

#include <bit>
#include <istream>
#include <ostream>
#include <string>

#include "ccl/error.hpp"

namespace ccl::io {
namespace {

// Dimension cap for reads so a corrupt header cannot request terabytes.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 31;

}  // namespace

void write_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> bytes{};
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(bytes.data(), bytes.size());
  require(static_cast<bool>(os), ErrorCode::IoError, "binary write failed");
}

void write_f64(std::ostream& os, double v) {
  write_u64(os, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t read_u64(std::istream& is) {
  std::array<char, 8> bytes{};
  is.read(bytes.data(), bytes.size());
  require(is.gcount() == 8, ErrorCode::ParseError, "unexpected end of binary data");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return v;
}

double read_f64(std::istream& is) { return std::bit_cast<double>(read_u64(is)); }

void write_magic(std::ostream& os, std::string_view magic) {
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
  require(static_cast<bool>(os), ErrorCode::IoError, "binary write failed");
}

void expect_magic(std::istream& is, std::string_view magic) {
  std::string got(magic.size(), '\0');
  is.read(got.data(), static_cast<std::streamsize>(got.size()));
  require(is.gcount() == static_cast<std::streamsize>(magic.size()) && got == magic,
          ErrorCode::ParseError,
          "bad file header: expected '" + std::string(magic) + "'");
}

void write_matrix(std::ostream& os, const Matrix& m) {
  write_u64(os, m.rows());
  write_u64(os, m.cols());
  for (double v : m.values()) write_f64(os, v);
}

Matrix read_matrix(std::istream& is) {
  const std::uint64_t rows = read_u64(is);
  const std::uint64_t cols = read_u64(is);
  require(rows > 0 && cols > 0 && rows <= kMaxElements / cols, ErrorCode::ParseError,
          "implausible matrix dimensions in binary data");
  Matrix m(rows, cols);
  for (double& v : m.values()) v = read_f64(is);
  return m;
}

void write_vector(std::ostream& os, std::span<const double> v) {
  write_u64(os, v.size());
  for (double d : v) write_f64(os, d);
}

Vector read_vector(std::istream& is) {
  const std::uint64_t n = read_u64(is);
  require(n <= kMaxElements, ErrorCode::ParseError, "implausible vector length");
  Vector v(n);
  for (double& d : v) d = read_f64(is);
  return v;
}

}  // namespace ccl::io
