#include <immintrin.h>

#include <cmath>

#include "ccl/kernels.hpp"

namespace ccl::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double dot_raw(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  return dot_raw(a.data(), b.data(), a.size());
}

void gemv(std::span<const double> a, std::size_t rows, std::size_t cols,
          std::span<const double> x, std::span<double> y) {
  const double* base = a.data();
  const double* xv = x.data();
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot_raw(base + r * cols, xv, cols);
  }
}

void axpby(double alpha, std::span<const double> x, double beta,
           std::span<double> y) {
  const std::size_t n = y.size();
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d yy = _mm256_mul_pd(vb, _mm256_loadu_pd(y.data() + i));
    _mm256_storeu_pd(y.data() + i,
                     _mm256_fmadd_pd(va, _mm256_loadu_pd(x.data() + i), yy));
  }
  for (; i < n; ++i) y[i] = alpha * x[i] + beta * y[i];
}

namespace {

// Row i of the update; returns dot(new row, v) when v is non-null.
inline double update_row(double* row, const double* trow, std::size_t n, double decay,
                         double half_rate, double pull, double ei, double xi,
                         const double* e, const double* x, const double* v) {
  const __m256d vdecay = _mm256_set1_pd(decay);
  const __m256d vhalf = _mm256_set1_pd(half_rate);
  const __m256d vpull = _mm256_set1_pd(pull);
  const __m256d vei = _mm256_set1_pd(ei);
  const __m256d vxi = _mm256_set1_pd(xi);
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d xj = _mm256_loadu_pd(x + j);
    const __m256d ej = _mm256_loadu_pd(e + j);
    const __m256d outer = _mm256_add_pd(_mm256_mul_pd(vei, xj), _mm256_mul_pd(vxi, ej));
    __m256d nv = _mm256_fmadd_pd(vhalf, outer, _mm256_mul_pd(vdecay, _mm256_loadu_pd(row + j)));
    if (trow != nullptr) nv = _mm256_fmadd_pd(vpull, _mm256_loadu_pd(trow + j), nv);
    _mm256_storeu_pd(row + j, nv);
    if (v != nullptr) acc = _mm256_fmadd_pd(nv, _mm256_loadu_pd(v + j), acc);
  }
  double dot = v != nullptr ? hsum(acc) : 0.0;
  // Same operation order as the vector body so A stays exactly symmetric.
  for (; j < n; ++j) {
    const double outer = ei * x[j] + xi * e[j];
    double nv = std::fma(half_rate, outer, decay * row[j]);
    if (trow != nullptr) nv = std::fma(pull, trow[j], nv);
    row[j] = nv;
    if (v != nullptr) dot += nv * v[j];
  }
  return dot;
}

}  // namespace

void sym_rank2_update(std::span<double> a, std::size_t n, double decay,
                      double half_rate, std::span<const double> e,
                      std::span<const double> x,
                      std::span<const double> target, double pull) {
  const double* t = target.empty() ? nullptr : target.data();
  for (std::size_t i = 0; i < n; ++i) {
    update_row(a.data() + i * n, t != nullptr ? t + i * n : nullptr, n, decay, half_rate,
               pull, e[i], x[i], e.data(), x.data(), nullptr);
  }
}

void sym_rank2_update_apply(std::span<double> a, std::size_t n, double decay,
                            double half_rate, std::span<const double> e,
                            std::span<const double> x,
                            std::span<const double> target, double pull,
                            std::span<const double> v, std::span<double> out) {
  const double* t = target.empty() ? nullptr : target.data();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = update_row(a.data() + i * n, t != nullptr ? t + i * n : nullptr, n, decay,
                        half_rate, pull, e[i], x[i], e.data(), x.data(), v.data());
  }
}

}  // namespace ccl::kernels::avx2
