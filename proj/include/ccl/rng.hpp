#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace ccl {

// Seedable generator with a platform-independent sample stream.
//
// Raw bits come from std::mt19937_64, whose output sequence is fixed by the
// standard. Uniforms take the top 53 bits; normals use the Marsaglia polar
// method on those uniforms. std::normal_distribution is deliberately not used
// because its algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1).
  double uniform();
  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  // k distinct indices drawn from [0, n), in draw order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Seed for an independent sub-stream (trial, layer, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return seed ^ index;
}

}  // namespace ccl
