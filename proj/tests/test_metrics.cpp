#include <cmath>
#include <numbers>

#include "ccl/linalg.hpp"
#include "ccl/metrics.hpp"
#include "ccl/rng.hpp"
#include "ccl/signals.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccl;

namespace {

TimeSeries shifted(const TimeSeries& u, std::size_t shift, std::size_t len) {
  return u.slice(shift, shift + len);
}

}  // namespace

TEST_CASE("nrmse") {
  const TimeSeries t = gen_sine(20, 400);
  CHECK(nrmse(t, t) == 0.0);

  Matrix mean(400, 1, 0.0);
  double m = 0.0;
  for (std::size_t k = 0; k < 400; ++k) m += t(k, 0) / 400;
  for (double& v : mean.values()) v = m;
  CHECK(nrmse(TimeSeries(mean), t) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(nrmse(gen_sine(20, 400, 0.5), t) == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("channel permutation invariance") {
    Rng rng(1);
    const Matrix a = oracle::random_normal(50, 3, rng);
    const Matrix b = oracle::random_normal(50, 3, rng);
    Matrix ap(50, 3), bp(50, 3);
    for (std::size_t k = 0; k < 50; ++k)
      for (std::size_t c = 0; c < 3; ++c) {
        ap(k, c) = a(k, (c + 1) % 3);
        bp(k, c) = b(k, (c + 1) % 3);
      }
    CHECK(nrmse(TimeSeries(a), TimeSeries(b)) ==
          doctest::Approx(nrmse(TimeSeries(ap), TimeSeries(bp))).epsilon(1e-14));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(nrmse(gen_sine(20, 10), gen_sine(20, 11)), Error);
    CHECK_THROWS_AS(nrmse(t, TimeSeries(Matrix(400, 1, 3.0))), Error);
  }
}

TEST_CASE("phase_align") {
  const TimeSeries base = gen_multivar_cycle(3, 23, 600, 4);
  const TimeSeries target = shifted(base, 20, 500);
  SUBCASE("identity") {
    const PhaseAlignment a = phase_align(target, target, 10);
    CHECK(a.lag == 0);
    CHECK(a.correlation == doctest::Approx(1.0));
  }
  SUBCASE("constructed delay") {
    // pred(n + 5) = target(n)
    const TimeSeries pred = shifted(base, 15, 500);
    const PhaseAlignment a = phase_align(pred, target, 10);
    CHECK(a.lag == 5);
    CHECK(nrmse(a.aligned_pred, a.aligned_target) < 1e-12);
    CHECK(phase_align(target, pred, 10).lag == -5);
  }
  SUBCASE("noisy shifted copies") {
    const TimeSeries clean = gen_sine(31, 700);
    int hits = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      Rng rng(1000 + trial);
      Matrix noisy(500, 1);
      for (std::size_t k = 0; k < 500; ++k) noisy(k, 0) = clean(k, 0) + 0.1 * rng.normal();
      // pred(n) = clean(n) + noise, target(n) = clean(n + 7): pred lags by 7
      hits += phase_align(TimeSeries(noisy), shifted(clean, 7, 500), 15).lag == 7;
    }
    CHECK(hits >= 95);
  }
  SUBCASE("too short") {
    CHECK_THROWS_AS(phase_align(gen_sine(5, 10), gen_sine(5, 10), 10), Error);
  }
}

TEST_CASE("estimate_period") {
  SUBCASE("pure sine") {
    const PeriodTrace t = estimate_period(gen_sine(20, 4000, 3.0), 400);
    CHECK(t.windows.size() == 10);
    for (const PeriodWindow& w : t.windows) {
      REQUIRE(w.period);
      CHECK(std::abs(*w.period - 20.0) < 0.05);
      CHECK(w.amplitude == doctest::Approx(3.0).epsilon(0.01));
    }
  }
  SUBCASE("amplitude invariance") {
    const TimeSeries a = gen_sine(27.3, 3000, 1.0, 0.2);
    const TimeSeries b = gen_sine(27.3, 3000, 0.01, 0.2);
    const PeriodTrace ta = estimate_period(a, 500), tb = estimate_period(b, 500);
    for (std::size_t i = 0; i < ta.windows.size(); ++i)
      CHECK(*ta.windows[i].period == doctest::Approx(*tb.windows[i].period).epsilon(1e-12));
  }
  SUBCASE("constant signal is undefined everywhere") {
    const PeriodTrace t = estimate_period(TimeSeries(Matrix(1200, 1, 0.4)), 300);
    CHECK(t.undefined_count() == t.windows.size());
  }
  SUBCASE("amplitude floor") {
    PeriodOptions o;
    o.window = 400;
    o.min_amplitude = 0.05;
    CHECK(estimate_period(gen_sine(20, 800, 0.01), o).undefined_count() == 2);
    CHECK(estimate_period(gen_sine(20, 800, 0.1), o).undefined_count() == 0);
  }
  SUBCASE("chirp tracks the instantaneous period") {
    // phase(n) = 2 pi sum 1 / T(n), T rising linearly from 20 to 35
    const std::size_t len = 30000;
    std::vector<double> y(len);
    double phase = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
      y[k] = std::sin(phase);
      phase += 2.0 * std::numbers::pi / (20.0 + 15.0 * static_cast<double>(k) / len);
    }
    const PeriodTrace t = estimate_period(TimeSeries::from_channel(y), 600);
    double prev = 0.0;
    for (const PeriodWindow& w : t.windows) {
      REQUIRE(w.period);
      const double mid = static_cast<double>(w.start) + 300.0;
      CHECK(std::abs(*w.period - (20.0 + 15.0 * mid / len)) < 0.5);
      CHECK(*w.period > prev - 0.1);
      prev = *w.period;
    }
  }
  SUBCASE("multi-channel input") {
    CHECK_THROWS_AS(estimate_period(gen_multivar_cycle(2, 20, 400, 1), 100), Error);
  }
}

TEST_CASE("detect_failure") {
  SUBCASE("frozen state") {
    Matrix s(5, 100, 0.3);
    const FailureVerdict v = detect_failure(s, 1.0);
    CHECK(v.pc1_variance < 1e-20);
    CHECK(v.failed);
    CHECK(v.threshold == 1.0);
  }
  SUBCASE("circle of radius 2") {
    Matrix s(2, 400);
    for (std::size_t k = 0; k < 400; ++k) {
      s(0, k) = 2.0 * std::cos(2.0 * std::numbers::pi * k / 40.0);
      s(1, k) = 2.0 * std::sin(2.0 * std::numbers::pi * k / 40.0);
    }
    const FailureVerdict v = detect_failure(s, 1.0);
    // sample variance with divisor L - 1
    CHECK(v.pc1_variance == doctest::Approx(2.0 * 400.0 / 399.0).epsilon(1e-9));
    CHECK_FALSE(v.failed);
  }
  SUBCASE("rotation invariance") {
    Rng rng(2);
    const Matrix states = oracle::random_normal(4, 60, rng);
    const PcaResult q = pca(oracle::random_normal(10, 4, rng));
    const Matrix rotated = oracle::naive_mul(oracle::naive_transpose(q.components), states);
    CHECK(detect_failure(rotated, 1.0).pc1_variance ==
          doctest::Approx(detect_failure(states, 1.0).pc1_variance).epsilon(1e-10));
  }
  SUBCASE("too few samples") {
    CHECK_THROWS_AS(detect_failure(Matrix(3, 1), 1.0), Error);
  }
  CHECK(pc1_variance(gen_sine(20, 2000)) == doctest::Approx(0.5).epsilon(1e-3));
}
