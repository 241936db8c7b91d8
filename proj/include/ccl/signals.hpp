#pragma once

#include <cstdint>
#include <filesystem>

#include "ccl/timeseries.hpp"

namespace ccl {

// Affine distortion gain * u + offset applied from time index `onset` on.
struct DistortionSpec {
  double gain = 1.0;
  double offset = 0.0;
  std::size_t onset = 0;
};

// u(n) = amplitude * sin(2 pi n / period + phase)
TimeSeries gen_sine(double period, std::size_t length, double amplitude = 1.0,
                    double phase = 0.0);

// u(n) = amplitude * (sin(2 pi n / 7) + sin(2 pi n / 21)); period 21.
TimeSeries gen_two_sine(std::size_t length, double amplitude = 1.0);

// Channel m: a_m sin(2 pi n / period + phi_m) + c_m, with a_m ~ U[0.5, 1.5],
// phi_m ~ U[0, 2 pi), c_m ~ U[-0.5, 0.5] drawn in that order per channel.
TimeSeries gen_multivar_cycle(std::size_t channels, double period, std::size_t length,
                              std::uint64_t seed);

TimeSeries distort(const TimeSeries& u, const DistortionSpec& spec);

// Per-channel zero mean, unit variance (divisor L). Constant channels are only
// centered.
TimeSeries standardize(const TimeSeries& u);

// Comma-separated, '.' decimal, optional single header line, one row per step.
TimeSeries load_csv(const std::filesystem::path& path);

// Writes the header (labels, or ch0..chM-1) then one row per step using the
// shortest representation that parses back to the same double.
void save_csv(const TimeSeries& u, const std::filesystem::path& path);

}  // namespace ccl
