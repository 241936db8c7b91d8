#pragma once

#include "ccl/matrix.hpp"

namespace ccl {

// Symmetric positive-semidefinite soft projection with its aperture.
class Conceptor {
 public:
  Conceptor() = default;
  Conceptor(Matrix c, double aperture);

  static Conceptor zero(std::size_t n, double aperture) {
    return {Matrix(n, n), aperture};
  }
  static Conceptor identity(std::size_t n, double aperture) {
    return {Matrix::identity(n), aperture};
  }

  std::size_t dim() const noexcept { return c_.rows(); }
  double aperture() const noexcept { return aperture_; }
  const Matrix& matrix() const noexcept { return c_; }
  // Mutable access for the in-place online updates.
  Matrix& matrix() noexcept { return c_; }

  // C v
  Vector apply(std::span<const double> v) const;

 private:
  Matrix c_;
  double aperture_ = 1.0;
};

}  // namespace ccl
