#include "ccl/conceptor.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "ccl/kernels.hpp"
#include "ccl/linalg.hpp"
#include "ccl/matrix_io.hpp"
#include "eigen_bridge.hpp"

namespace ccl {
namespace {

constexpr std::string_view kConceptorMagic = "CCLCONC1";

void check_aperture(double gamma) {
  require(gamma > 0.0 && std::isfinite(gamma), ErrorCode::InvalidAperture,
          "aperture must be positive and finite");
}

void check_same_dim(const Conceptor& c, std::size_t n, const char* what) {
  require(c.dim() == n, ErrorCode::DimensionMismatch,
          std::string(what) + ": conceptor is " + std::to_string(c.dim()) +
              "-dimensional, vector has length " + std::to_string(n));
}

}  // namespace

Conceptor::Conceptor(Matrix c, double aperture) : c_(std::move(c)), aperture_(aperture) {
  require(c_.is_square(), ErrorCode::NotSquare, "conceptor matrix must be square");
  check_aperture(aperture);
  require(all_finite(c_.values()), ErrorCode::NonFinite, "conceptor has non-finite entries");
  // Exact symmetry is kept from here on by the symmetric update kernels.
  for (std::size_t i = 0; i < c_.rows(); ++i) {
    for (std::size_t j = i + 1; j < c_.cols(); ++j) {
      const double avg = 0.5 * (c_(i, j) + c_(j, i));
      c_(i, j) = avg;
      c_(j, i) = avg;
    }
  }
}

Vector Conceptor::apply(std::span<const double> v) const { return ccl::apply(c_, v); }

void CclParams::validate() const {
  require(eta > 0.0 && std::isfinite(eta), ErrorCode::InvalidParam,
          "learning rate eta must be positive");
  require(beta >= 0.0 && std::isfinite(beta), ErrorCode::InvalidParam,
          "control gain beta must be nonnegative");
  check_aperture(gamma);
  require(!target.matrix().empty(), ErrorCode::InvalidParam, "CCL target conceptor missing");
}

Conceptor conceptor_from_correlation(const Matrix& r, double gamma) {
  check_aperture(gamma);
  require(r.is_square(), ErrorCode::NotSquare, "correlation matrix must be square");
  const double inv_g2 = 1.0 / (gamma * gamma);
  const SymmetricEigen eig = symmetric_eigen(r);
  const std::size_t n = r.rows();
  Vector gains(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double s = std::max(eig.values[j], 0.0);
    gains[j] = s / (s + inv_g2);
  }
  // U diag(gains) U^T
  const auto u = detail::view(eig.vectors);
  Eigen::Map<const Eigen::VectorXd> g(gains.data(), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd c = u * g.asDiagonal() * u.transpose();
  return Conceptor(detail::from_eigen(c), gamma);
}

Conceptor conceptor_from_states(const Matrix& states, double gamma) {
  check_aperture(gamma);
  const auto s = detail::view(states);
  const Eigen::MatrixXd r = (s * s.transpose()) / static_cast<double>(states.cols());
  return conceptor_from_correlation(detail::from_eigen(r), gamma);
}

ReservoirState constrained_step(const ReservoirParams& p, const ReservoirState& s,
                                std::span<const double> u, const Conceptor& c) {
  check_same_dim(c, p.n, "constrained_step");
  ReservoirState next{c.apply(leaky_update(p, s.x, u)), s.k + 1};
  require(all_finite(next.x), ErrorCode::NonFinite, "reservoir state became non-finite");
  return next;
}

void autoconceptor_update(Conceptor& c, std::span<const double> x, double eta,
                          double gamma) {
  check_same_dim(c, x.size(), "autoconceptor_update");
  check_aperture(gamma);
  const std::size_t n = c.dim();
  Vector e = c.apply(x);
  for (std::size_t i = 0; i < n; ++i) e[i] = x[i] - e[i];
  const double decay = 1.0 - eta / (gamma * gamma);
  kernels::sym_rank2_update(c.matrix().values(), n, decay, 0.5 * eta, e, x, {}, 0.0);
}

Conceptor autoconceptor_step(const Conceptor& c, std::span<const double> x, double eta,
                             double gamma) {
  Conceptor next = c;
  autoconceptor_update(next, x, eta, gamma);
  return next;
}

std::pair<Conceptor, Conceptor> ccl_step(const Conceptor& c, std::span<const double> x,
                                         const CclParams& params) {
  params.validate();
  check_same_dim(params.target, c.dim(), "ccl_step target");
  Conceptor next = autoconceptor_step(c, x, params.eta, params.gamma);
  Conceptor adapt = next;
  kernels::axpby(params.beta, params.target.matrix().values(), 1.0 - params.beta,
                 adapt.matrix().values());
  return {std::move(next), std::move(adapt)};
}

void merged_ccl_update(Conceptor& c_adapt, std::span<const double> x,
                       const CclParams& params) {
  check_same_dim(c_adapt, x.size(), "merged_ccl_update");
  check_same_dim(params.target, x.size(), "merged_ccl_update target");
  const std::size_t n = c_adapt.dim();
  Vector e = c_adapt.apply(x);
  for (std::size_t i = 0; i < n; ++i) e[i] = x[i] - e[i];
  const double decay = 1.0 - params.eta / (params.gamma * params.gamma) - params.beta;
  kernels::sym_rank2_update(c_adapt.matrix().values(), n, decay, 0.5 * params.eta, e, x,
                            params.target.matrix().values(), params.beta);
}

Conceptor merged_ccl_step(const Conceptor& c_adapt, std::span<const double> x,
                          const CclParams& params) {
  require(params.eta >= 0.0 && params.beta >= 0.0, ErrorCode::InvalidParam,
          "merged_ccl_step: eta and beta must be nonnegative");
  check_aperture(params.gamma);
  Conceptor next = c_adapt;
  merged_ccl_update(next, x, params);
  return next;
}

void interpolate_into(Conceptor& out, const Conceptor& c0, const Conceptor& c1,
                      double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, ErrorCode::LambdaOutOfRange,
          "interpolation parameter must lie in [0, 1], got " + std::to_string(lambda));
  require(c0.dim() == c1.dim(), ErrorCode::DimensionMismatch,
          "interpolated conceptors differ in dimension");
  require(c0.aperture() == c1.aperture(), ErrorCode::InvalidAperture,
          "interpolated conceptors differ in aperture");
  if (out.dim() != c0.dim()) out = c0;
  Matrix& m = out.matrix();
  std::memcpy(m.data(), c0.matrix().data(), m.size() * sizeof(double));
  kernels::axpby(lambda, c1.matrix().values(), 1.0 - lambda, m.values());
}

Conceptor interpolate_conceptors(const Conceptor& c0, const Conceptor& c1, double lambda) {
  Conceptor out = c0;
  interpolate_into(out, c0, c1, lambda);
  return out;
}

double InterpolationSchedule::lambda_at(std::uint64_t k) const {
  return std::min(1.0, rate * static_cast<double>(k));
}

std::uint64_t InterpolationSchedule::steps_to_end() const {
  require(rate > 0.0, ErrorCode::InvalidParam, "interpolation rate must be positive");
  return static_cast<std::uint64_t>(std::ceil(1.0 / rate));
}

ConceptorControlLoop::ConceptorControlLoop(Conceptor initial, CclParams params)
    : params_(std::move(params)), estimate_(std::move(initial)), adapted_(estimate_) {
  params_.validate();
  check_same_dim(params_.target, estimate_.dim(), "ConceptorControlLoop target");
  refresh_adapted();
}

void ConceptorControlLoop::observe(std::span<const double> x) {
  autoconceptor_update(estimate_, x, params_.eta, params_.gamma);
  refresh_adapted();
}

void ConceptorControlLoop::set_target(const Conceptor& target) {
  check_same_dim(target, estimate_.dim(), "ConceptorControlLoop target");
  params_.target.matrix() = target.matrix();
  refresh_adapted();
}

void ConceptorControlLoop::refresh_adapted() {
  Matrix& a = adapted_.matrix();
  std::memcpy(a.data(), estimate_.matrix().data(), a.size() * sizeof(double));
  kernels::axpby(params_.beta, params_.target.matrix().values(), 1.0 - params_.beta,
                 a.values());
}

void save_conceptor(const Conceptor& c, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path.string());
  io::write_magic(os, kConceptorMagic);
  io::write_u64(os, c.dim());
  io::write_f64(os, c.aperture());
  for (double v : c.matrix().values()) io::write_f64(os, v);
}

Conceptor load_conceptor(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::IoError, "cannot open " + path.string());
  io::expect_magic(is, kConceptorMagic);
  const std::uint64_t n = io::read_u64(is);
  require(n > 0 && n <= (1u << 15), ErrorCode::ParseError, "implausible conceptor size");
  const double aperture = io::read_f64(is);
  Matrix m(n, n);
  for (double& v : m.values()) v = io::read_f64(is);
  return Conceptor(std::move(m), aperture);
}

}  // namespace ccl
