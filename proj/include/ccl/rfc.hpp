#pragma once

#include <cstdint>
#include <vector>

#include "ccl/reservoir.hpp"
#include "ccl/timeseries.hpp"

namespace ccl {

// Elementwise conceptor over the expanded feature space.
struct VectorConceptor {
  Vector c;
  double aperture = 1.0;
};

struct RfcConfig {
  std::size_t n = 50;
  std::size_t n_rfc = 200;
  double rho = 0.9;
  double rho_in = 0.9;
  double rho_b = 0.2;
  std::size_t inputs = 1;
  std::uint64_t seed = 0;
  // Entries of the expansion F' are expand_scale * N(0, 1).
  double expand_scale = 1.0;
  // Test hook: F' = I (requires n_rfc == n) and G = W rescaled.
  bool identity_expansion = false;
};

// One random-feature conceptor layer:
//   x(k+1) = tanh(G z(k) + W_in u(k) + b)
//   z(k+1) = c ⊙ (F' x(k+1))
// Weights are fixed after rfc_init; x, z and c evolve.
struct RfcLayer {
  std::size_t n = 0;
  std::size_t n_rfc = 0;
  double rho = 0.0;
  Matrix f_expand;  // n_rfc x n
  Matrix g;         // n x n_rfc
  Matrix w_in;      // n x inputs
  Vector bias;      // n
  Readout readout;  // outputs x n; empty until trained

  Vector x;
  Vector z;
  VectorConceptor c_adapt;

  std::size_t inputs() const noexcept { return w_in.cols(); }
  // Back to x = 0, z = 0.
  void reset_state();
};

struct RfcStep {
  Vector x;
  Vector z;
  Vector y;  // empty if the layer has no readout yet
};

RfcLayer rfc_init(const RfcConfig& cfg);

// Spectral radius of the composite recurrent map G F'.
double loop_spectral_radius(const RfcLayer& layer);

// Advances the layer one step; c_adapt is read, not updated.
RfcStep rfc_step(RfcLayer& layer, std::span<const double> u);

struct VectorCclParams {
  double eta = 0.8;
  double gamma = 8.0;
  double beta = 4e-3;
};

// c += eta (z^2 - c z^2 - gamma^-2 c) - beta (c - c_target), clipped to [0, 1].
void vector_ccl_update(VectorConceptor& c, std::span<const double> z,
                       const VectorCclParams& p, std::span<const double> c_target);
VectorConceptor vector_ccl_step(const VectorConceptor& c, std::span<const double> z,
                                const VectorCclParams& p,
                                std::span<const double> c_target);

// Fixed point of the beta = 0 update for mean squared feature activity.
Vector vector_conceptor_from_energy(std::span<const double> mean_z2, double gamma);

struct RfcTraining {
  RfcLayer layer;   // readout set, c_adapt = c_target, state reset
  Vector c_target;
};

// One clean presentation: an unconstrained run (c = 1) gives the mean z^2 and
// hence c_target; a second run with c frozen at c_target provides the states
// for the one-step-ahead ridge readout. The first `washout` steps of each run
// are discarded.
RfcTraining train_rfc(RfcLayer layer, const TimeSeries& clean, std::size_t washout,
                      double reg, double gamma);

// L identical layers; layer 1 reads the external input, layer i > 1 reads the
// readout output of layer i - 1. With `adaptive` false every c stays at
// c_target (the no-CCL control).
class Hierarchy {
 public:
  Hierarchy(const RfcTraining& trained, std::size_t layers, VectorCclParams params,
            bool adaptive);

  std::size_t size() const noexcept { return layers_.size(); }
  const RfcLayer& layer(std::size_t i) const { return layers_.at(i); }
  const Vector& c_target() const noexcept { return c_target_; }
  bool adaptive() const noexcept { return adaptive_; }

  // Returns [y^1, ..., y^L] for this step.
  std::vector<Vector> step(std::span<const double> u);

 private:
  std::vector<RfcLayer> layers_;
  Vector c_target_;
  VectorCclParams params_;
  bool adaptive_;
};

std::vector<Vector> hierarchy_step(Hierarchy& h, std::span<const double> u);

}  // namespace ccl
