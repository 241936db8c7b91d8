#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's linear algebra.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ccl/matrix.hpp"
#include "ccl/rng.hpp"

namespace oracle {

using ccl::Matrix;
using ccl::Vector;

inline Matrix random_normal(std::size_t r, std::size_t c, ccl::Rng& rng) {
  Matrix m(r, c);
  for (double& v : m.values()) v = rng.normal();
  return m;
}

inline Matrix naive_mul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

inline Matrix naive_transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// Random SPD matrix A A^T / n + shift I.
inline Matrix random_spd(std::size_t n, ccl::Rng& rng, double shift = 0.1) {
  const Matrix a = random_normal(n, n, rng);
  Matrix r = naive_mul(a, naive_transpose(a));
  for (double& v : r.values()) v /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) += shift;
  return r;
}

// Solves A X = B by Gaussian elimination with partial pivoting.
inline Matrix gauss_solve(Matrix a, Matrix b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
    for (std::size_t c = 0; c < b.cols(); ++c) std::swap(b(col, c), b(piv, c));
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = 0; c < n; ++c) a(r, c) -= f * a(col, c);
      for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) b(r, c) /= a(r, r);
  return b;
}

inline Matrix inverse(const Matrix& a) { return gauss_solve(a, Matrix::identity(a.rows())); }

// Gelfand's formula rho = lim ||A^k||^(1/k) evaluated at k = 2^squarings by
// repeated normalized squaring.
inline double gelfand_radius(const Matrix& a, int squarings = 40) {
  Matrix p = a;
  double log_scale = 0.0;  // log of the factor divided out of p so far
  for (int i = 0; i < squarings; ++i) {
    p = naive_mul(p, p);
    double norm = 0.0;
    for (double v : p.values()) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : p.values()) v /= norm;
    log_scale = 2.0 * log_scale + std::log(norm);
  }
  return std::exp(log_scale / std::ldexp(1.0, squarings));
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline Vector jacobi_eigenvalues(Matrix a) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  Vector ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

inline double fro(const Matrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace oracle
