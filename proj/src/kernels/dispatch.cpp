#include <atomic>
#include <cstdlib>
#include <cstring>

#include "ccl/error.hpp"
#include "ccl/kernels.hpp"

namespace ccl::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(CCL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() noexcept {
  const char* env = std::getenv("CCL_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Backend::Scalar;
  return cpu_has_avx2() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& current() noexcept {
  static std::atomic<Backend> b{initial_backend()};
  return b;
}

bool use_avx2() noexcept {
#if defined(CCL_HAVE_AVX2)
  return current().load(std::memory_order_relaxed) == Backend::Avx2;
#else
  return false;
#endif
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  return b == Backend::Avx2 ? "avx2" : "scalar";
}

bool available(Backend b) noexcept {
  return b == Backend::Scalar || cpu_has_avx2();
}

Backend active() noexcept { return current().load(); }

void select(Backend b) {
  require(available(b), ErrorCode::InvalidParam,
          "SIMD backend not supported on this CPU: " + std::string(to_string(b)));
  current().store(b);
}

#if defined(CCL_HAVE_AVX2)
#define CCL_DISPATCH(fn, ...) \
  (use_avx2() ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define CCL_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

namespace {

void check(bool ok, const char* what) {
  require(ok, ErrorCode::DimensionMismatch, std::string("kernel size mismatch: ") + what);
}

void check_rank2(std::size_t a, std::size_t n, std::size_t e, std::size_t x,
                 std::size_t target) {
  check(a == n * n && e == n && x == n, "rank-2 update operands");
  check(target == 0 || target == n * n, "rank-2 update target");
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  check(a.size() == b.size(), "dot");
  return CCL_DISPATCH(dot, a, b);
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  check(a.size() == rows * cols && x.size() == cols && y.size() == rows, "gemv");
  CCL_DISPATCH(gemv, a, rows, cols, x, y);
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  check(x.size() == y.size(), "axpby");
  CCL_DISPATCH(axpby, alpha, x, beta, y);
}

void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull) {
  check_rank2(a.size(), n, e.size(), x.size(), target.size());
  CCL_DISPATCH(sym_rank2_update, a, n, decay, half_rate, e, x, target, pull);
}

void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out) {
  check_rank2(a.size(), n, e.size(), x.size(), target.size());
  check(v.size() == n && out.size() == n, "rank-2 update apply vectors");
  CCL_DISPATCH(sym_rank2_update_apply, a, n, decay, half_rate, e, x, target, pull, v, out);
}

#undef CCL_DISPATCH

}  // namespace ccl::kernels
