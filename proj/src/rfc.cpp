#include "ccl/rfc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccl/kernels.hpp"
#include "ccl/linalg.hpp"
#include "ccl/rng.hpp"

namespace ccl {
namespace {

void check_len(std::size_t got, std::size_t want, const char* what) {
  require(got == want, ErrorCode::DimensionMismatch,
          std::string(what) + ": expected length " + std::to_string(want) + ", got " +
              std::to_string(got));
}

}  // namespace

void RfcLayer::reset_state() {
  std::fill(x.begin(), x.end(), 0.0);
  std::fill(z.begin(), z.end(), 0.0);
}

RfcLayer rfc_init(const RfcConfig& cfg) {
  require(cfg.n >= 1, ErrorCode::InvalidParam, "RFC base dimension must be >= 1");
  require(cfg.n_rfc >= cfg.n, ErrorCode::InvalidParam,
          "RFC expansion dimension must be >= base dimension");
  require(cfg.rho > 0.0 && std::isfinite(cfg.rho), ErrorCode::InvalidParam,
          "spectral radius must be positive");
  require(cfg.rho_in >= 0.0 && cfg.rho_b >= 0.0, ErrorCode::InvalidParam,
          "input and bias scalings must be nonnegative");
  require(cfg.expand_scale > 0.0, ErrorCode::InvalidParam, "expand_scale must be positive");
  require(!cfg.identity_expansion || cfg.n_rfc == cfg.n, ErrorCode::InvalidParam,
          "identity expansion needs n_rfc == n");

  Rng rng(cfg.seed);
  RfcLayer layer;
  layer.n = cfg.n;
  layer.n_rfc = cfg.n_rfc;
  layer.rho = cfg.rho;

  Matrix w(cfg.n, cfg.n);
  for (double& v : w.values()) v = rng.normal();

  if (cfg.identity_expansion) {
    layer.f_expand = Matrix::identity(cfg.n);
    layer.g = w;
  } else {
    layer.f_expand = Matrix(cfg.n_rfc, cfg.n);
    for (double& v : layer.f_expand.values()) v = cfg.expand_scale * rng.normal();
    Matrix compress(cfg.n, cfg.n_rfc);
    const double s = 1.0 / std::sqrt(static_cast<double>(cfg.n_rfc));
    for (double& v : compress.values()) v = s * rng.normal();
    layer.g = multiply(w, compress);
  }
  const double rho = spectral_radius(multiply(layer.g, layer.f_expand));
  require(rho > 0.0, ErrorCode::ZeroSpectralRadius, "RFC loop map has zero spectral radius");
  layer.g = scaled(layer.g, cfg.rho / rho);

  layer.w_in = Matrix(cfg.n, cfg.inputs);
  for (double& v : layer.w_in.values()) v = cfg.rho_in * rng.normal();
  layer.bias.resize(cfg.n);
  for (double& v : layer.bias) v = cfg.rho_b * rng.normal();

  layer.x.assign(cfg.n, 0.0);
  layer.z.assign(cfg.n_rfc, 0.0);
  layer.c_adapt = {Vector(cfg.n_rfc, 1.0), 1.0};
  return layer;
}

double loop_spectral_radius(const RfcLayer& layer) {
  return spectral_radius(multiply(layer.g, layer.f_expand));
}

RfcStep rfc_step(RfcLayer& layer, std::span<const double> u) {
  check_len(u.size(), layer.inputs(), "rfc_step input");
  check_len(layer.c_adapt.c.size(), layer.n_rfc, "rfc_step conceptor");

  Vector x(layer.n);
  kernels::gemv(layer.g.values(), layer.n, layer.n_rfc, layer.z, x);
  for (std::size_t i = 0; i < layer.n; ++i) {
    double drive = x[i] + layer.bias[i];
    const auto win = layer.w_in.row(i);
    for (std::size_t j = 0; j < u.size(); ++j) drive += win[j] * u[j];
    x[i] = std::tanh(drive);
  }
  Vector z(layer.n_rfc);
  kernels::gemv(layer.f_expand.values(), layer.n_rfc, layer.n, x, z);
  for (std::size_t i = 0; i < layer.n_rfc; ++i) z[i] *= layer.c_adapt.c[i];
  require(all_finite(x) && all_finite(z), ErrorCode::NonFinite, "RFC state became non-finite");

  layer.x = x;
  layer.z = z;
  Vector y = layer.readout.w_out.empty() ? Vector{} : layer.readout.apply(x);
  return {std::move(x), std::move(z), std::move(y)};
}

void vector_ccl_update(VectorConceptor& c, std::span<const double> z,
                       const VectorCclParams& p, std::span<const double> c_target) {
  check_len(z.size(), c.c.size(), "vector_ccl_update feature vector");
  check_len(c_target.size(), c.c.size(), "vector_ccl_update target");
  const double inv_g2 = 1.0 / (p.gamma * p.gamma);
  for (std::size_t i = 0; i < c.c.size(); ++i) {
    const double ci = c.c[i];
    const double z2 = z[i] * z[i];
    const double next = ci + p.eta * (z2 - ci * z2 - inv_g2 * ci) - p.beta * (ci - c_target[i]);
    c.c[i] = std::clamp(next, 0.0, 1.0);
  }
}

VectorConceptor vector_ccl_step(const VectorConceptor& c, std::span<const double> z,
                                const VectorCclParams& p,
                                std::span<const double> c_target) {
  VectorConceptor next = c;
  vector_ccl_update(next, z, p, c_target);
  return next;
}

Vector vector_conceptor_from_energy(std::span<const double> mean_z2, double gamma) {
  require(gamma > 0.0, ErrorCode::InvalidAperture, "aperture must be positive");
  const double inv_g2 = 1.0 / (gamma * gamma);
  Vector c(mean_z2.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = mean_z2[i] / (mean_z2[i] + inv_g2);
  return c;
}

RfcTraining train_rfc(RfcLayer layer, const TimeSeries& clean, std::size_t washout,
                      double reg, double gamma) {
  require(clean.length() > washout + 1, ErrorCode::SeriesTooShort,
          "train_rfc: series too short for washout");
  check_len(clean.channels(), layer.inputs(), "train_rfc input channels");

  // Pass 1: unconstrained features.
  layer.reset_state();
  layer.c_adapt = {Vector(layer.n_rfc, 1.0), gamma};
  Vector energy(layer.n_rfc, 0.0);
  std::size_t counted = 0;
  for (std::size_t k = 0; k < clean.length(); ++k) {
    const RfcStep s = rfc_step(layer, clean.at(k));
    if (k >= washout) {
      for (std::size_t i = 0; i < layer.n_rfc; ++i) energy[i] += s.z[i] * s.z[i];
      ++counted;
    }
  }
  for (double& e : energy) e /= static_cast<double>(counted);
  Vector c_target = vector_conceptor_from_energy(energy, gamma);

  // Pass 2: states under the target conceptor. x(k+1) pairs with u(k+1).
  layer.reset_state();
  layer.c_adapt = {c_target, gamma};
  const std::size_t kept = clean.length() - 1 - washout;
  Matrix states(layer.n, kept);
  Matrix targets(kept, clean.channels());
  for (std::size_t k = 0; k + 1 < clean.length(); ++k) {
    const RfcStep s = rfc_step(layer, clean.at(k));
    if (k >= washout) {
      const std::size_t col = k - washout;
      for (std::size_t i = 0; i < layer.n; ++i) states(i, col) = s.x[i];
      const auto next = clean.at(k + 1);
      std::copy(next.begin(), next.end(), targets.row(col).begin());
    }
  }
  layer.readout = train_readout(states, TimeSeries(std::move(targets)), reg);
  layer.reset_state();
  return {std::move(layer), std::move(c_target)};
}

Hierarchy::Hierarchy(const RfcTraining& trained, std::size_t layers, VectorCclParams params,
                     bool adaptive)
    : c_target_(trained.c_target), params_(params), adaptive_(adaptive) {
  require(layers >= 1, ErrorCode::InvalidParam, "hierarchy needs at least one layer");
  require(!trained.layer.readout.w_out.empty(), ErrorCode::InvalidParam,
          "hierarchy needs a trained readout");
  require(trained.layer.readout.outputs() == trained.layer.inputs(),
          ErrorCode::DimensionMismatch,
          "stacking needs readout outputs == layer inputs");
  require(params.gamma > 0.0, ErrorCode::InvalidAperture, "aperture must be positive");
  RfcLayer proto = trained.layer;
  proto.reset_state();
  proto.c_adapt = {c_target_, params.gamma};
  layers_.assign(layers, proto);
}

std::vector<Vector> Hierarchy::step(std::span<const double> u) {
  std::vector<Vector> outputs;
  outputs.reserve(layers_.size());
  Vector input(u.begin(), u.end());
  for (RfcLayer& layer : layers_) {
    RfcStep s = rfc_step(layer, input);
    if (adaptive_) vector_ccl_update(layer.c_adapt, s.z, params_, c_target_);
    input = s.y;
    outputs.push_back(std::move(s.y));
  }
  return outputs;
}

std::vector<Vector> hierarchy_step(Hierarchy& h, std::span<const double> u) {
  return h.step(u);
}

}  // namespace ccl
