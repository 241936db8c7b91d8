#include <cmath>

#include "ccl/kernels.hpp"
#include "ccl/matrix.hpp"
#include "ccl/rng.hpp"
#include "doctest.h"

using namespace ccl;
namespace k = ccl::kernels;

namespace {

Vector random_vec(std::size_t n, Rng& rng) {
  Vector v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

Vector random_sym(std::size_t n, Rng& rng) {
  Vector a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a[i * n + j] = a[j * n + i] = rng.normal();
  return a;
}

double max_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const std::size_t kSizes[] = {1, 2, 3, 4, 5, 7, 8, 13, 16, 31, 64, 257};

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  Rng rng(1);
  for (std::size_t n : kSizes) {
    const Vector a = random_vec(n, rng), b = random_vec(n, rng);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) d += a[i] * b[i];
    CHECK(k::scalar::dot(a, b) == doctest::Approx(d).epsilon(1e-13));

    const Vector m = random_vec(3 * n, rng);
    Vector y(3);
    k::scalar::gemv(m, 3, n, a, y);
    for (std::size_t r = 0; r < 3; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += m[r * n + c] * a[c];
      CHECK(y[r] == doctest::Approx(s).epsilon(1e-13));
    }

    Vector z = b;
    k::scalar::axpby(2.0, a, -0.5, z);
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(2.0 * a[i] - 0.5 * b[i]));

    const Vector e = random_vec(n, rng), x = random_vec(n, rng), t = random_sym(n, rng);
    Vector c = random_sym(n, rng);
    const Vector c0 = c;
    k::scalar::sym_rank2_update(c, n, 0.9, 0.05, e, x, t, 0.1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double want = 0.9 * c0[i * n + j] + 0.1 * t[i * n + j] +
                            0.05 * (e[i] * x[j] + x[i] * e[j]);
        CHECK(c[i * n + j] == doctest::Approx(want).epsilon(1e-13));
        CHECK(c[i * n + j] == c[j * n + i]);
      }
  }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!k::available(k::Backend::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
    return;
  }
  Rng rng(2);
  for (std::size_t n : kSizes) {
    CAPTURE(n);
    const Vector a = random_vec(n, rng), b = random_vec(n, rng);
    CHECK(k::avx2::dot(a, b) == doctest::Approx(k::scalar::dot(a, b)).epsilon(1e-12));

    for (std::size_t rows : {std::size_t{1}, std::size_t{5}, n}) {
      const Vector m = random_vec(rows * n, rng);
      Vector ys(rows), yv(rows);
      k::scalar::gemv(m, rows, n, a, ys);
      k::avx2::gemv(m, rows, n, a, yv);
      CHECK(max_diff(ys, yv) < 1e-12 * std::sqrt(static_cast<double>(n)));
    }

    Vector zs = b, zv = b;
    k::scalar::axpby(0.3, a, 0.7, zs);
    k::avx2::axpby(0.3, a, 0.7, zv);
    CHECK(max_diff(zs, zv) < 1e-15);

    const Vector e = random_vec(n, rng), x = random_vec(n, rng), t = random_sym(n, rng);
    const Vector v = random_vec(n, rng);
    for (bool with_target : {false, true}) {
      const std::span<const double> tgt = with_target ? std::span<const double>(t)
                                                      : std::span<const double>();
      Vector cs = random_sym(n, rng);
      Vector cv = cs;
      k::scalar::sym_rank2_update(cs, n, 0.99, 0.01, e, x, tgt, 0.2);
      k::avx2::sym_rank2_update(cv, n, 0.99, 0.01, e, x, tgt, 0.2);
      CHECK(max_diff(cs, cv) < 1e-14);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) REQUIRE(cv[i * n + j] == cv[j * n + i]);

      Vector fs = cs, fv = cs, os(n), ov(n);
      k::scalar::sym_rank2_update_apply(fs, n, 0.97, 0.02, e, x, tgt, 0.1, v, os);
      k::avx2::sym_rank2_update_apply(fv, n, 0.97, 0.02, e, x, tgt, 0.1, v, ov);
      CHECK(max_diff(fs, fv) < 1e-14);
      CHECK(max_diff(os, ov) < 1e-12 * std::sqrt(static_cast<double>(n)));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) REQUIRE(fv[i * n + j] == fv[j * n + i]);
    }
  }
}

TEST_CASE("fused update-apply equals update then gemv") {
  Rng rng(3);
  for (std::size_t n : kSizes) {
    const Vector e = random_vec(n, rng), x = random_vec(n, rng), v = random_vec(n, rng);
    Vector a1 = random_sym(n, rng);
    Vector a2 = a1;
    Vector o1(n), o2(n);
    k::sym_rank2_update_apply(a1, n, 0.9, 0.1, e, x, {}, 0.0, v, o1);
    k::sym_rank2_update(a2, n, 0.9, 0.1, e, x, {}, 0.0);
    k::gemv(a2, n, n, v, o2);
    CHECK(max_diff(a1, a2) == 0.0);
    CHECK(max_diff(o1, o2) < 1e-12 * std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("backend selection") {
  const k::Backend before = k::active();
  CHECK(k::available(k::Backend::Scalar));
  k::select(k::Backend::Scalar);
  CHECK(k::active() == k::Backend::Scalar);
  CHECK(k::to_string(k::Backend::Scalar) == "scalar");
  if (!k::available(k::Backend::Avx2)) {
    CHECK_THROWS_AS(k::select(k::Backend::Avx2), Error);
  }
  k::select(before);
}

TEST_CASE("dimension checks") {
  Vector a(3), b(4), y(2);
  CHECK_THROWS_AS(k::dot(a, b), Error);
  CHECK_THROWS_AS(k::gemv(a, 2, 2, b, y), Error);
}
