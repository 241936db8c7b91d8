#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "ccl/linalg.hpp"
#include "ccl/metrics.hpp"
#include "ccl/signals.hpp"
#include "doctest.h"

using namespace ccl;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected ccl::Error");
  return ErrorCode::InvalidParam;
}

}  // namespace

TEST_CASE("gen_sine") {
  const TimeSeries s = gen_sine(4, 9);
  const double want[] = {0, 1, 0, -1, 0, 1, 0, -1, 0};
  for (std::size_t k = 0; k < 9; ++k) CHECK(std::abs(s(k, 0) - want[k]) < 1e-12);

  const TimeSeries t = gen_sine(20, 500, 0.7, 0.3);
  for (std::size_t k = 0; k + 20 < 500; ++k) CHECK(std::abs(t(k + 20, 0) - t(k, 0)) < 1e-12);

  const PeriodTrace p = estimate_period(gen_sine(20, 2000), 400);
  for (const PeriodWindow& w : p.windows) {
    REQUIRE(w.period);
    CHECK(std::abs(*w.period - 20.0) < 0.05);
  }
  CHECK_THROWS_AS(gen_sine(0.0, 10), Error);
  CHECK_THROWS_AS(gen_sine(-2.0, 10), Error);
}

TEST_CASE("gen_two_sine") {
  const TimeSeries u = gen_two_sine(1050);
  CHECK(u(0, 0) == 0.0);
  for (std::size_t k = 0; k + 21 < 1050; ++k) REQUIRE(std::abs(u(k + 21, 0) - u(k, 0)) < 1e-12);

  // DFT over 50 full periods: energy sits in bins 1050/21 = 50 and 1050/7 = 150.
  const std::size_t n = 1050;
  std::vector<double> mag(n / 2);
  for (std::size_t f = 0; f < n / 2; ++f) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += u(k, 0) * std::polar(1.0, -2.0 * std::numbers::pi * f * k / n);
    mag[f] = std::abs(acc);
  }
  CHECK(mag[50] == doctest::Approx(n / 2.0).epsilon(1e-9));
  CHECK(mag[150] == doctest::Approx(n / 2.0).epsilon(1e-9));
  for (std::size_t f = 0; f < n / 2; ++f)
    if (f != 50 && f != 150) CHECK(mag[f] < 1e-8 * n);
}

TEST_CASE("gen_multivar_cycle") {
  const TimeSeries one = gen_multivar_cycle(1, 40, 200, 5);
  // a sin(2 pi n / 40 + phi) + c: recover (a, phi, c) from three samples
  const double c = (one(0, 0) + one(20, 0)) / 2.0;
  const double a_sin = one(0, 0) - c, a_cos = one(10, 0) - c;
  const double a = std::hypot(a_sin, a_cos), phi = std::atan2(a_sin, a_cos);
  CHECK((a >= 0.5 && a <= 1.5));
  CHECK((c >= -0.5 && c <= 0.5));
  const TimeSeries ref = gen_sine(40, 200, a, phi);
  for (std::size_t k = 0; k < 200; ++k) CHECK(one(k, 0) == doctest::Approx(ref(k, 0) + c).epsilon(1e-9));

  const TimeSeries a10 = gen_multivar_cycle(10, 40, 400, 1);
  CHECK(a10 == gen_multivar_cycle(10, 40, 400, 1));
  CHECK_FALSE(a10 == gen_multivar_cycle(10, 40, 400, 2));
  const PcaResult p = pca(a10.data());
  CHECK(p.variances[1] > 1e-3 * p.variances[0]);
  CHECK(p.variances[2] < 1e-10 * p.variances[0]);
  CHECK_THROWS_AS(gen_multivar_cycle(0, 40, 10, 1), Error);
}

TEST_CASE("distort") {
  const TimeSeries u = gen_two_sine(300);
  CHECK(distort(u, {1.0, 0.0, 0}) == u);
  CHECK(distort(u, {0.3, 0.5, 300}) == u);

  const TimeSeries d = distort(u, {0.3, 0.0, 0});
  double mu = 0.0, md = 0.0;
  for (std::size_t k = 0; k < 300; ++k) {
    mu = std::max(mu, std::abs(u(k, 0)));
    md = std::max(md, std::abs(d(k, 0)));
  }
  CHECK(md == doctest::Approx(0.3 * mu).epsilon(1e-12));

  const TimeSeries late = distort(u, {2.0, 1.0, 100});
  for (std::size_t k = 0; k < 300; ++k)
    CHECK(late(k, 0) == (k < 100 ? u(k, 0) : 2.0 * u(k, 0) + 1.0));

  const TimeSeries u3 = distort(u, {3.0, 0.0, 0});
  const TimeSeries lhs = distort(u3, {0.3, 0.0, 50});
  const TimeSeries rhs = distort(u, {0.3, 0.0, 50});
  for (std::size_t k = 0; k < 300; ++k) CHECK(lhs(k, 0) == doctest::Approx(3.0 * rhs(k, 0)));
}

TEST_CASE("standardize") {
  Matrix m(4, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    m(k, 0) = static_cast<double>(k);
    m(k, 1) = 5.0;
  }
  const TimeSeries s = standardize(TimeSeries(m));
  double mean = 0.0, var = 0.0;
  for (std::size_t k = 0; k < 4; ++k) mean += s(k, 0) / 4;
  for (std::size_t k = 0; k < 4; ++k) var += (s(k, 0) - mean) * (s(k, 0) - mean) / 4;
  CHECK(std::abs(mean) < 1e-15);
  CHECK(var == doctest::Approx(1.0));
  for (std::size_t k = 0; k < 4; ++k) CHECK(s(k, 1) == 0.0);
}

TEST_CASE("load_csv") {
  SUBCASE("with header") {
    const auto p = temp_file("ccl_t1.csv", "a,b\n1,2\n3,4.5\n-6,1e-3\n");
    const TimeSeries u = load_csv(p);
    CHECK(u.length() == 3);
    CHECK(u.channels() == 2);
    CHECK(u.labels() == std::vector<std::string>{"a", "b"});
    CHECK(u(2, 1) == 1e-3);
    std::filesystem::remove(p);
  }
  SUBCASE("without header") {
    const auto p = temp_file("ccl_t2.csv", "1,2,3\n4,5,6\n");
    const TimeSeries u = load_csv(p);
    CHECK(u.length() == 2);
    CHECK(u.channels() == 3);
    CHECK(u.labels().empty());
    std::filesystem::remove(p);
  }
  SUBCASE("ragged row names the row") {
    const auto p = temp_file("ccl_t3.csv", "1,2\n3\n");
    try {
      load_csv(p);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    std::filesystem::remove(p);
  }
  SUBCASE("non-numeric cell") {
    const auto p = temp_file("ccl_t4.csv", "1,2\n3,x\n");
    CHECK(code_of([&] { load_csv(p); }) == ErrorCode::ParseError);
    std::filesystem::remove(p);
  }
  SUBCASE("missing file") {
    CHECK(code_of([] { load_csv("/nonexistent/ccl.csv"); }) == ErrorCode::IoError);
  }
  SUBCASE("save then load is bit-identical") {
    const TimeSeries u = gen_multivar_cycle(3, 17.3, 100, 9);
    const auto p = std::filesystem::temp_directory_path() / "ccl_t5.csv";
    save_csv(u, p);
    const TimeSeries v = load_csv(p);
    CHECK(v.data() == u.data());
    CHECK(v.labels() == std::vector<std::string>{"ch0", "ch1", "ch2"});
    std::filesystem::remove(p);
  }
}
