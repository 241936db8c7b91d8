#include "ccl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ccl/kernels.hpp"
#include "eigen_bridge.hpp"

namespace ccl {

using detail::from_eigen;
using detail::view;

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows(), ErrorCode::DimensionMismatch,
          "multiply: inner dimensions differ");
  return from_eigen(view(a) * view(b));
}

Matrix add(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::DimensionMismatch, "add: shapes differ");
  Matrix out = a;
  kernels::axpby(1.0, b.values(), 1.0, out.values());
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::DimensionMismatch, "subtract: shapes differ");
  Matrix out = a;
  kernels::axpby(-1.0, b.values(), 1.0, out.values());
  return out;
}

Matrix scaled(const Matrix& m, double s) {
  Matrix out = m;
  for (double& v : out.values()) v *= s;
  return out;
}

Vector apply(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), ErrorCode::DimensionMismatch,
          "apply: matrix columns (" + std::to_string(a.cols()) +
              ") != vector length (" + std::to_string(x.size()) + ")");
  Vector y(a.rows());
  kernels::gemv(a.values(), a.rows(), a.cols(), x, y);
  return y;
}

double frobenius_norm(const Matrix& m) {
  return std::sqrt(kernels::dot(m.values(), m.values()));
}

double max_abs(const Matrix& m) {
  double best = 0.0;
  for (double v : m.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(),
          ErrorCode::DimensionMismatch, "max_abs_diff: shapes differ");
  double best = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    best = std::max(best, std::abs(a.values()[i] - b.values()[i]));
  return best;
}

double asymmetry(const Matrix& m) {
  require(m.is_square(), ErrorCode::NotSquare, "asymmetry: matrix not square");
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      best = std::max(best, std::abs(m(i, j) - m(j, i)));
  return best;
}

bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

double spectral_radius(const Matrix& m) {
  require(m.is_square(), ErrorCode::NotSquare, "spectral_radius: matrix not square");
  const Eigen::MatrixXd dense = view(m);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, /*computeEigenvectors=*/false);
  require(solver.info() == Eigen::Success, ErrorCode::DegenerateInput,
          "spectral_radius: eigenvalue iteration did not converge");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix scale_to_spectral_radius(const Matrix& m, double target) {
  require(m.is_square(), ErrorCode::NotSquare,
          "scale_to_spectral_radius: matrix not square");
  require(target > 0.0 && std::isfinite(target), ErrorCode::InvalidParam,
          "scale_to_spectral_radius: target must be positive");
  const double rho = spectral_radius(m);
  const double norm = frobenius_norm(m);
  require(rho > 1e-12 * std::max(1.0, norm), ErrorCode::ZeroSpectralRadius,
          "scale_to_spectral_radius: matrix has zero spectral radius");
  return scaled(m, target / rho);
}

SymmetricEigen symmetric_eigen(const Matrix& m) {
  require(m.is_square(), ErrorCode::NotSquare, "symmetric_eigen: matrix not square");
  const Eigen::MatrixXd dense = view(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
  require(solver.info() == Eigen::Success, ErrorCode::DegenerateInput,
          "symmetric_eigen: decomposition failed");
  const auto n = static_cast<Eigen::Index>(m.rows());
  SymmetricEigen out{Vector(m.rows()), Matrix(m.rows(), m.rows())};
  // Eigen sorts ascending; flip to descending.
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = n - 1 - j;
    out.values[static_cast<std::size_t>(j)] = solver.eigenvalues()(src);
    for (Eigen::Index i = 0; i < n; ++i)
      out.vectors(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
          solver.eigenvectors()(i, src);
  }
  return out;
}

PcaResult pca(const Matrix& samples) {
  require(samples.rows() >= 2, ErrorCode::DegenerateInput,
          "pca: need at least two samples");
  const auto x = view(samples);
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centered.transpose() * centered) / static_cast<double>(samples.rows() - 1);

  SymmetricEigen eig = symmetric_eigen(from_eigen(cov));
  for (double& v : eig.values) v = std::max(v, 0.0);

  PcaResult out;
  out.components = std::move(eig.vectors);
  out.variances = std::move(eig.values);
  out.mean.assign(mean.data(), mean.data() + mean.size());
  return out;
}

Matrix ridge_solve(const Matrix& x, const Matrix& y, double reg) {
  require(x.cols() == y.cols(), ErrorCode::DimensionMismatch,
          "ridge_solve: X and Y must have the same number of samples");
  require(reg >= 0.0 && std::isfinite(reg), ErrorCode::InvalidParam,
          "ridge_solve: regularization must be nonnegative");
  const auto xv = view(x);
  const auto yv = view(y);
  Eigen::MatrixXd gram = xv * xv.transpose();
  gram.diagonal().array() += reg;
  const Eigen::MatrixXd rhs = xv * yv.transpose();  // N x M

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  require(llt.info() == Eigen::Success && llt.rcond() > 1e-14,
          ErrorCode::SingularSystem, "ridge_solve: X X^T + reg I is singular");
  const Eigen::MatrixXd wt = llt.solve(rhs);
  return from_eigen(wt.transpose());
}

}  // namespace ccl
