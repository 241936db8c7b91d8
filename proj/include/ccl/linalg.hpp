#pragma once

#include "ccl/matrix.hpp"

namespace ccl {

struct PcaResult {
  Matrix components;  // N x N, orthonormal columns, ordered by variance
  Vector variances;   // nonincreasing, >= 0
  Vector mean;        // per-channel mean of the input rows
};

struct SymmetricEigen {
  Vector values;   // descending
  Matrix vectors;  // column j pairs with values[j]
};

// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const Matrix& m);

// m * (target / rho(m)). Throws NotSquare or ZeroSpectralRadius.
Matrix scale_to_spectral_radius(const Matrix& m, double target);

SymmetricEigen symmetric_eigen(const Matrix& m);

// PCA over rows of an L x N sample matrix (each row one observation), via the
// eigen-decomposition of the sample covariance (divisor L - 1).
PcaResult pca(const Matrix& samples);

// W = Y X^T (X X^T + reg I)^-1 with X: N x L and Y: M x L; returns M x N.
Matrix ridge_solve(const Matrix& x, const Matrix& y, double reg);

}  // namespace ccl
