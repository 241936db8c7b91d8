#pragma once

#include <filesystem>
#include <utility>

#include "ccl/conceptor_matrix.hpp"
#include "ccl/reservoir.hpp"

namespace ccl {

struct CclParams {
  double eta = 0.01;    // learning rate
  double beta = 0.0;    // control gain
  double gamma = 1.0;   // aperture
  Conceptor target;

  void validate() const;
};

// C = R (R + gamma^-2 I)^-1 with R = S S^T / L for states S (n x L).
Conceptor conceptor_from_states(const Matrix& states, double gamma);

// Same map applied to a given correlation matrix.
Conceptor conceptor_from_correlation(const Matrix& r, double gamma);

// C [(1 - alpha) x + alpha tanh(W x + W_in u + b)]
ReservoirState constrained_step(const ReservoirParams& p, const ReservoirState& s,
                                std::span<const double> u, const Conceptor& c);

// One stochastic-gradient step of the conceptor objective:
//   C += eta ((x - C x) x^T - gamma^-2 C), then symmetrized.
void autoconceptor_update(Conceptor& c, std::span<const double> x, double eta,
                          double gamma);
Conceptor autoconceptor_step(const Conceptor& c, std::span<const double> x,
                             double eta, double gamma);

// Two-step control loop: c_next is the autoconceptor estimate, c_adapt the
// estimate pushed toward the target, c_next - beta (c_next - target).
std::pair<Conceptor, Conceptor> ccl_step(const Conceptor& c, std::span<const double> x,
                                         const CclParams& params);

// Single-conceptor loop that both estimates and integrates the push:
//   C += eta ((x - C x) x^T - gamma^-2 C) - beta (C - target)
void merged_ccl_update(Conceptor& c_adapt, std::span<const double> x,
                       const CclParams& params);
Conceptor merged_ccl_step(const Conceptor& c_adapt, std::span<const double> x,
                          const CclParams& params);

// (1 - lambda) C0 + lambda C1; lambda = 0 gives C0.
Conceptor interpolate_conceptors(const Conceptor& c0, const Conceptor& c1, double lambda);

// Writes (1 - lambda) C0 + lambda C1 into `out` without allocating.
void interpolate_into(Conceptor& out, const Conceptor& c0, const Conceptor& c1,
                      double lambda);

// lambda(k) = min(1, rate k)
struct InterpolationSchedule {
  double rate = 1e-5;

  double lambda_at(std::uint64_t k) const;
  // First step at which lambda reaches 1.
  std::uint64_t steps_to_end() const;
};

// In-place two-step loop for long runs; avoids per-step matrix copies.
class ConceptorControlLoop {
 public:
  ConceptorControlLoop(Conceptor initial, CclParams params);

  // Updates the estimate from x and refreshes the adapted conceptor.
  void observe(std::span<const double> x);
  void set_target(const Conceptor& target);

  const Conceptor& estimate() const noexcept { return estimate_; }
  const Conceptor& adapted() const noexcept { return adapted_; }
  const CclParams& params() const noexcept { return params_; }
  CclParams& params() noexcept { return params_; }

 private:
  void refresh_adapted();

  CclParams params_;
  Conceptor estimate_;
  Conceptor adapted_;
};

// Binary conceptor file: magic "CCLCONC1", u64 n, f64 aperture, then n*n
// row-major little-endian float64.
void save_conceptor(const Conceptor& c, const std::filesystem::path& path);
Conceptor load_conceptor(const std::filesystem::path& path);

}  // namespace ccl
