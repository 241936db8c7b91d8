#pragma once

// Inner-loop kernels. Each kernel exists as a scalar reference implementation
// and, where the target supports it, an AVX2+FMA variant. The public entry
// points dispatch to whichever backend is active; the first call selects the
// best backend the CPU supports unless CCL_SIMD=scalar is set in the
// environment.
//
// Results of the two backends agree to rounding (summation order differs),
// so bit-reproducibility holds per backend, not across backends.

#include <cstddef>
#include <span>
#include <string_view>

namespace ccl::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view to_string(Backend b) noexcept;
bool available(Backend b) noexcept;
Backend active() noexcept;
// Throws ccl::Error(InvalidParam) when `b` is not available on this CPU.
void select(Backend b);

// sum_i a[i] * b[i]
double dot(std::span<const double> a, std::span<const double> b);

// y = A x, A row-major rows x cols.
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);

// y = alpha * x + beta * y
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);

// Symmetric rank-2 update of an n x n row-major matrix:
//   A = decay * A + pull * T + half_rate * (e x^T + x e^T)
// `target` may be empty, in which case the pull term is skipped.
void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull);

// sym_rank2_update followed by out = A_new v, fused into one pass over A.
void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out);

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);
void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull);
void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out);
}  // namespace scalar

namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y);
void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y);
void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull);
void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out);
}  // namespace avx2

}  // namespace ccl::kernels
