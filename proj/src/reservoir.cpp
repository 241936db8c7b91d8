#include "ccl/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "ccl/kernels.hpp"
#include "ccl/linalg.hpp"
#include "ccl/matrix_io.hpp"
#include "ccl/rng.hpp"

namespace ccl {
namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
  require(got == want, ErrorCode::DimensionMismatch,
          std::string(what) + ": expected length " + std::to_string(want) +
              ", got " + std::to_string(got));
}

constexpr std::string_view kReservoirMagic = "CCLRES01";
constexpr std::string_view kReadoutMagic = "CCLOUT01";

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::IoError, "cannot open " + path.string());
  return is;
}

void check_finite_state(std::span<const double> x) {
  require(all_finite(x), ErrorCode::NonFinite, "reservoir state became non-finite");
}

}  // namespace

DegradationMask::DegradationMask(std::size_t n, std::vector<std::size_t> clamped)
    : n_(n), clamped_(std::move(clamped)) {
  std::vector<bool> seen(n, false);
  for (std::size_t i : clamped_) {
    require(i < n, ErrorCode::IndexOutOfRange,
            "degradation index " + std::to_string(i) + " out of range for n = " +
                std::to_string(n));
    require(!seen[i], ErrorCode::InvalidParam,
            "duplicate degradation index " + std::to_string(i));
    seen[i] = true;
  }
}

DegradationMask DegradationMask::random(std::size_t n, std::size_t count,
                                        std::uint64_t seed) {
  require(count <= n, ErrorCode::InvalidParam,
          "cannot clamp more neurons than the network has");
  Rng rng(seed);
  return DegradationMask(n, rng.sample_indices(n, count));
}

Vector Readout::apply(std::span<const double> x) const {
  return ccl::apply(w_out, x);
}

ReservoirParams init_reservoir(const ReservoirConfig& cfg) {
  require(cfg.n >= 1, ErrorCode::InvalidParam, "reservoir size must be >= 1");
  require(cfg.alpha > 0.0 && cfg.alpha <= 1.0, ErrorCode::InvalidParam,
          "leak rate alpha must lie in (0, 1]");
  require(cfg.rho > 0.0 && std::isfinite(cfg.rho), ErrorCode::InvalidParam,
          "spectral radius must be positive");
  require(cfg.rho_in >= 0.0 && cfg.rho_b >= 0.0, ErrorCode::InvalidParam,
          "input and bias scalings must be nonnegative");
  require(cfg.inputs >= 1, ErrorCode::InvalidParam, "need at least one input channel");

  Rng rng(cfg.seed);
  ReservoirParams p;
  p.n = cfg.n;
  p.alpha = cfg.alpha;
  p.rho = cfg.rho;
  p.rho_in = cfg.rho_in;
  p.rho_b = cfg.rho_b;
  p.seed = cfg.seed;

  Matrix w(cfg.n, cfg.n);
  for (double& v : w.values()) v = rng.normal();
  p.w = scale_to_spectral_radius(w, cfg.rho);

  p.w_in = Matrix(cfg.n, cfg.inputs);
  for (double& v : p.w_in.values()) v = cfg.rho_in * rng.normal();
  p.bias.resize(cfg.n);
  for (double& v : p.bias) v = cfg.rho_b * rng.normal();
  return p;
}

Vector leaky_update(const ReservoirParams& p, std::span<const double> x,
                    std::span<const double> u) {
  check_dim(x.size(), p.n, "state");
  check_dim(u.size(), p.inputs(), "input");
  Vector pre(p.n);
  kernels::gemv(p.w.values(), p.n, p.n, x, pre);
  const std::size_t m = p.inputs();
  for (std::size_t i = 0; i < p.n; ++i) {
    double drive = pre[i] + p.bias[i];
    const auto win = p.w_in.row(i);
    for (std::size_t j = 0; j < m; ++j) drive += win[j] * u[j];
    pre[i] = (1.0 - p.alpha) * x[i] + p.alpha * std::tanh(drive);
  }
  return pre;
}

ReservoirState drive_step(const ReservoirParams& p, const ReservoirState& s,
                          std::span<const double> u) {
  ReservoirState next{leaky_update(p, s.x, u), s.k + 1};
  check_finite_state(next.x);
  return next;
}

Harvest harvest(const ReservoirParams& p, const TimeSeries& u, std::size_t washout) {
  require(u.length() > washout + 1, ErrorCode::SeriesTooShort,
          "harvest: series of length " + std::to_string(u.length()) +
              " too short for washout " + std::to_string(washout));
  check_dim(u.channels(), p.inputs(), "harvest input channels");

  const std::size_t kept = u.length() - 1 - washout;
  Harvest out{Matrix(p.n, kept), TimeSeries{}};
  Matrix targets(kept, u.channels());

  ReservoirState s = ReservoirState::zero(p.n);
  for (std::size_t k = 0; k + 1 < u.length(); ++k) {
    // After this step s.x has consumed u(k); its target is u(k + 1).
    s = drive_step(p, s, u.at(k));
    if (k >= washout) {
      const std::size_t col = k - washout;
      for (std::size_t i = 0; i < p.n; ++i) out.states(i, col) = s.x[i];
      const auto next = u.at(k + 1);
      std::copy(next.begin(), next.end(), targets.row(col).begin());
    }
  }
  out.targets = TimeSeries(std::move(targets), u.labels());
  return out;
}

Readout train_readout(const Matrix& states, const TimeSeries& targets, double reg) {
  require(states.cols() == targets.length(), ErrorCode::DimensionMismatch,
          "train_readout: state and target counts differ");
  return {ridge_solve(states, transpose(targets.data()), reg), reg};
}

std::pair<ReservoirState, Vector> autonomous_step(const ReservoirParams& p,
                                                  const ReservoirState& s,
                                                  const Readout& r,
                                                  const Conceptor* c) {
  require(r.outputs() == p.inputs(), ErrorCode::DimensionMismatch,
          "autonomous_step: readout outputs must equal reservoir inputs");
  Vector y = r.apply(s.x);
  Vector pre = leaky_update(p, s.x, y);
  ReservoirState next{c != nullptr ? c->apply(pre) : std::move(pre), s.k + 1};
  check_finite_state(next.x);
  return {std::move(next), std::move(y)};
}

void clamp_in_place(std::span<double> x, const DegradationMask& m) {
  check_dim(x.size(), m.n(), "degradation mask");
  for (std::size_t i : m.clamped()) x[i] = 0.0;
}

ReservoirState apply_degradation(const ReservoirState& s, const DegradationMask& m) {
  ReservoirState out = s;
  clamp_in_place(out.x, m);
  return out;
}

void save_reservoir(const ReservoirParams& p, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  io::write_magic(os, kReservoirMagic);
  io::write_u64(os, p.n);
  io::write_u64(os, p.seed);
  for (double v : {p.alpha, p.rho, p.rho_in, p.rho_b}) io::write_f64(os, v);
  io::write_matrix(os, p.w);
  io::write_matrix(os, p.w_in);
  io::write_vector(os, p.bias);
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed: " + path.string());
}

ReservoirParams load_reservoir(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  io::expect_magic(is, kReservoirMagic);
  ReservoirParams p;
  p.n = io::read_u64(is);
  p.seed = io::read_u64(is);
  p.alpha = io::read_f64(is);
  p.rho = io::read_f64(is);
  p.rho_in = io::read_f64(is);
  p.rho_b = io::read_f64(is);
  p.w = io::read_matrix(is);
  p.w_in = io::read_matrix(is);
  p.bias = io::read_vector(is);
  require(p.w.rows() == p.n && p.w.cols() == p.n && p.w_in.rows() == p.n &&
              p.bias.size() == p.n,
          ErrorCode::ParseError, "reservoir file has inconsistent dimensions");
  return p;
}

void save_readout(const Readout& r, const std::filesystem::path& path) {
  std::ofstream os = open_out(path);
  io::write_magic(os, kReadoutMagic);
  io::write_f64(os, r.reg);
  io::write_matrix(os, r.w_out);
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed: " + path.string());
}

Readout load_readout(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  io::expect_magic(is, kReadoutMagic);
  Readout r;
  r.reg = io::read_f64(is);
  r.w_out = io::read_matrix(is);
  return r;
}

}  // namespace ccl
