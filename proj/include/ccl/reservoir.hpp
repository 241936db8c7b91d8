#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "ccl/conceptor_matrix.hpp"
#include "ccl/matrix.hpp"
#include "ccl/timeseries.hpp"

namespace ccl {

struct ReservoirConfig {
  std::size_t n = 100;
  double alpha = 1.0;   // leak rate, (0, 1]
  double rho = 0.9;     // spectral radius of W
  double rho_in = 1.0;  // input scaling
  double rho_b = 1.0;   // bias scaling
  std::size_t inputs = 1;
  std::uint64_t seed = 0;
};

// Fixed random weights of a leaky tanh network. Immutable after init.
struct ReservoirParams {
  std::size_t n = 0;
  double alpha = 1.0;
  double rho = 0.0;
  double rho_in = 0.0;
  double rho_b = 0.0;
  std::uint64_t seed = 0;
  Matrix w;     // n x n
  Matrix w_in;  // n x inputs
  Vector bias;  // n

  std::size_t inputs() const noexcept { return w_in.cols(); }
};

struct ReservoirState {
  Vector x;
  std::uint64_t k = 0;

  static ReservoirState zero(std::size_t n) { return {Vector(n, 0.0), 0}; }
};

// Set of clamped (removed) neurons.
class DegradationMask {
 public:
  DegradationMask() = default;
  // Throws IndexOutOfRange for an index >= n and InvalidParam on duplicates.
  DegradationMask(std::size_t n, std::vector<std::size_t> clamped);

  static DegradationMask random(std::size_t n, std::size_t count, std::uint64_t seed);

  std::size_t n() const noexcept { return n_; }
  std::size_t count() const noexcept { return clamped_.size(); }
  const std::vector<std::size_t>& clamped() const noexcept { return clamped_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> clamped_;
};

struct Readout {
  Matrix w_out;  // outputs x n
  double reg = 0.0;

  std::size_t outputs() const noexcept { return w_out.rows(); }
  Vector apply(std::span<const double> x) const;
};

// Harvested driven states, column k paired with target row k.
struct Harvest {
  Matrix states;        // n x L
  TimeSeries targets;   // L x inputs, one step ahead of the state's input
};

ReservoirParams init_reservoir(const ReservoirConfig& cfg);

// (1 - alpha) x + alpha tanh(W x + W_in u + b); the pre-projection update
// shared by every step variant.
Vector leaky_update(const ReservoirParams& p, std::span<const double> x,
                    std::span<const double> u);

ReservoirState drive_step(const ReservoirParams& p, const ReservoirState& s,
                          std::span<const double> u);

// Drives from x(0) = 0 over the whole series. For k in [washout, L - 1) it
// keeps the state that has just consumed u(k), paired with target u(k + 1).
Harvest harvest(const ReservoirParams& p, const TimeSeries& u, std::size_t washout);

// Ridge fit of the one-step-ahead readout.
Readout train_readout(const Matrix& states, const TimeSeries& targets, double reg);

// Closed loop with the readout's prediction fed back as input. Returns the
// next state and y(k) = W_out x(k) computed from the incoming state. A null
// conceptor means no projection.
std::pair<ReservoirState, Vector> autonomous_step(const ReservoirParams& p,
                                                  const ReservoirState& s,
                                                  const Readout& r,
                                                  const Conceptor* c = nullptr);

// Zeroes the clamped coordinates. Call after every update while degraded.
ReservoirState apply_degradation(const ReservoirState& s, const DegradationMask& m);
void clamp_in_place(std::span<double> x, const DegradationMask& m);

// Binary formats, little-endian float64, matrices as (u64 rows, u64 cols, data).
//   reservoir: "CCLRES01", u64 n, u64 seed, f64 alpha rho rho_in rho_b, W, W_in, b
//   readout:   "CCLOUT01", f64 reg, W_out
void save_reservoir(const ReservoirParams& p, const std::filesystem::path& path);
ReservoirParams load_reservoir(const std::filesystem::path& path);
void save_readout(const Readout& r, const std::filesystem::path& path);
Readout load_readout(const std::filesystem::path& path);

}  // namespace ccl
