#include <cmath>

#include "ccl/linalg.hpp"
#include "ccl/metrics.hpp"
#include "ccl/rfc.hpp"
#include "ccl/signals.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccl;

namespace {

RfcConfig reference_config(std::uint64_t seed = 1) {
  RfcConfig c;
  c.n = 50;
  c.n_rfc = 200;
  c.rho = 0.9;
  c.rho_in = 0.9;
  c.rho_b = 0.2;
  c.seed = seed;
  c.expand_scale = 1.0 / std::sqrt(50.0);
  return c;
}

RfcTraining trained(std::uint64_t seed = 1) {
  return train_rfc(rfc_init(reference_config(seed)), gen_two_sine(3201), 200, 0.01, 8.0);
}

}  // namespace

TEST_CASE("rfc_init") {
  SUBCASE("reference sizes and loop radius") {
    const RfcLayer l = rfc_init(reference_config());
    CHECK(l.f_expand.rows() == 200);
    CHECK(l.g.cols() == 200);
    CHECK(loop_spectral_radius(l) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(oracle::gelfand_radius(oracle::naive_mul(l.g, l.f_expand)) ==
          doctest::Approx(0.9).epsilon(1e-6));
  }
  SUBCASE("deterministic") {
    const RfcLayer a = rfc_init(reference_config(4));
    const RfcLayer b = rfc_init(reference_config(4));
    CHECK(a.f_expand == b.f_expand);
    CHECK(a.g == b.g);
    CHECK(a.w_in == b.w_in);
    CHECK(a.bias == b.bias);
  }
  SUBCASE("identity expansion reduces to a plain tanh network") {
    RfcConfig c = reference_config();
    c.n_rfc = c.n;
    c.identity_expansion = true;
    RfcLayer l = rfc_init(c);
    CHECK(l.f_expand == Matrix::identity(50));
    Vector x(50, 0.0);
    for (int k = 0; k < 20; ++k) {
      const double u = std::sin(0.3 * k);
      const RfcStep s = rfc_step(l, {&u, 1});
      Vector ref(50);
      for (std::size_t i = 0; i < 50; ++i) {
        double d = l.bias[i] + l.w_in(i, 0) * u;
        for (std::size_t j = 0; j < 50; ++j) d += l.g(i, j) * x[j];
        ref[i] = std::tanh(d);
      }
      for (std::size_t i = 0; i < 50; ++i) REQUIRE(s.x[i] == doctest::Approx(ref[i]).epsilon(1e-12));
      x = s.x;
    }
  }
  SUBCASE("invalid") {
    RfcConfig c = reference_config();
    c.n_rfc = 10;
    CHECK_THROWS_AS(rfc_init(c), Error);
    c = reference_config();
    c.identity_expansion = true;
    CHECK_THROWS_AS(rfc_init(c), Error);
  }
}

TEST_CASE("rfc_step") {
  RfcLayer l = rfc_init(reference_config());
  Rng rng(2);
  for (int k = 0; k < 10; ++k) {
    const double u = rng.normal();
    rfc_step(l, {&u, 1});
  }
  SUBCASE("zero conceptor cuts the recurrence") {
    l.c_adapt.c.assign(200, 0.0);
    const double u0 = 0.3, u1 = -0.6;
    const RfcStep s0 = rfc_step(l, {&u0, 1});
    for (double v : s0.z) CHECK(v == 0.0);
    const RfcStep s1 = rfc_step(l, {&u1, 1});
    for (std::size_t i = 0; i < 50; ++i)
      CHECK(s1.x[i] == doctest::Approx(std::tanh(l.w_in(i, 0) * u1 + l.bias[i])).epsilon(1e-15));
  }
  SUBCASE("unit conceptor gives the unconstrained expansion") {
    const double u = 0.5;
    const RfcStep s = rfc_step(l, {&u, 1});
    const Vector fz = ccl::apply(l.f_expand, s.x);
    for (std::size_t i = 0; i < 200; ++i) CHECK(s.z[i] == doctest::Approx(fz[i]).epsilon(1e-13));
    CHECK(s.y.empty());
  }
  SUBCASE("wrong input width") {
    const Vector u{1.0, 2.0};
    CHECK_THROWS_AS(rfc_step(l, u), Error);
  }
}

TEST_CASE("vector_ccl_update") {
  const Vector target{0.2, 0.5, 0.9};
  SUBCASE("no learning and full push returns the target") {
    VectorConceptor c{{0.7, 0.1, 0.3}, 8.0};
    vector_ccl_update(c, Vector{1.0, 2.0, 3.0}, {0.0, 8.0, 1.0}, target);
    for (std::size_t i = 0; i < 3; ++i) CHECK(c.c[i] == doctest::Approx(target[i]).epsilon(1e-15));
  }
  SUBCASE("zero features only decay") {
    VectorConceptor c{{0.7, 0.1, 0.3}, 2.0};
    const VectorConceptor d = vector_ccl_step(c, Vector(3, 0.0), {0.4, 2.0, 0.0}, target);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d.c[i] == doctest::Approx(0.9 * c.c[i]).epsilon(1e-15));
  }
  SUBCASE("scalar fixed point") {
    const double z = 0.3, gamma = 8.0;
    VectorConceptor c{{0.0}, gamma};
    for (int k = 0; k < 20000; ++k) vector_ccl_update(c, Vector{z}, {0.8, gamma, 0.0}, Vector{0.5});
    CHECK(c.c[0] == doctest::Approx(z * z / (z * z + 1.0 / (gamma * gamma))).epsilon(1e-9));
  }
  SUBCASE("entries stay in [0, 1]") {
    Rng rng(3);
    VectorConceptor c{Vector(64, 0.5), 8.0};
    const Vector tgt(64, 0.6);
    for (int k = 0; k < 2000; ++k) {
      Vector z(64);
      for (double& v : z) v = 3.0 * rng.normal();
      vector_ccl_update(c, z, {0.8, 8.0, 0.5}, tgt);
      for (double v : c.c) REQUIRE((v >= 0.0 && v <= 1.0));
    }
  }
  SUBCASE("stationary features converge to the energy fixed point") {
    Rng rng(4);
    const std::size_t n = 16;
    Vector sd(n), mean_z2(n);
    for (std::size_t i = 0; i < n; ++i) {
      sd[i] = 0.05 + 0.05 * static_cast<double>(i);
      mean_z2[i] = sd[i] * sd[i];
    }
    const Vector want = vector_conceptor_from_energy(mean_z2, 8.0);
    VectorConceptor c{Vector(n, 1.0), 8.0};
    Vector avg(n, 0.0);
    const int steps = 400000, tail = 200000;
    for (int k = 0; k < steps; ++k) {
      Vector z(n);
      for (std::size_t i = 0; i < n; ++i) z[i] = sd[i] * rng.normal();
      vector_ccl_update(c, z, {0.01, 8.0, 0.0}, want);
      if (k >= steps - tail)
        for (std::size_t i = 0; i < n; ++i) avg[i] += c.c[i] / tail;
    }
    for (std::size_t i = 0; i < n; ++i) CHECK(avg[i] == doctest::Approx(want[i]).epsilon(0.05));
  }
  SUBCASE("length mismatch") {
    VectorConceptor c{Vector(3, 0.5), 8.0};
    CHECK_THROWS_AS(vector_ccl_update(c, Vector(2, 0.0), {}, target), Error);
  }
}

TEST_CASE("train_rfc") {
  const RfcTraining t = trained();
  REQUIRE(t.c_target.size() == 200);
  for (double v : t.c_target) CHECK((v >= 0.0 && v < 1.0));
  CHECK(t.layer.c_adapt.c == t.c_target);

  RfcLayer l = t.layer;
  const TimeSeries u = gen_two_sine(900);
  std::vector<double> pred, target;
  for (std::size_t k = 0; k + 1 < 900; ++k) {
    const RfcStep s = rfc_step(l, u.at(k));
    if (k >= 399) {
      pred.push_back(s.y[0]);
      target.push_back(u(k + 1, 0));
    }
  }
  CHECK(pred.size() == 500);
  CHECK(nrmse(TimeSeries::from_channel(pred), TimeSeries::from_channel(target)) < 0.1);
}

TEST_CASE("hierarchy") {
  const RfcTraining t = trained();
  const VectorCclParams p{0.8, 8.0, 4e-3};

  SUBCASE("single layer equals rfc_step plus vector_ccl_update") {
    Hierarchy h(t, 1, p, true);
    RfcLayer l = t.layer;
    const TimeSeries u = gen_two_sine(200);
    for (std::size_t k = 0; k < 200; ++k) {
      const std::vector<Vector> ys = hierarchy_step(h, u.at(k));
      const RfcStep s = rfc_step(l, u.at(k));
      vector_ccl_update(l.c_adapt, s.z, p, t.c_target);
      REQUIRE(ys.size() == 1);
      REQUIRE(ys[0] == s.y);
      REQUIRE(h.layer(0).c_adapt.c == l.c_adapt.c);
    }
  }
  SUBCASE("frozen layers share weights and keep c_target") {
    Hierarchy h(t, 3, p, false);
    const TimeSeries u = gen_two_sine(300);
    for (std::size_t k = 0; k < 300; ++k) h.step(u.at(k));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(h.layer(i).c_adapt.c == t.c_target);
      CHECK(h.layer(i).g == t.layer.g);
      CHECK(h.layer(i).readout.w_out == t.layer.readout.w_out);
    }
  }
  SUBCASE("frozen hierarchy becomes periodic with the drive") {
    Hierarchy h(t, 4, p, false);
    const TimeSeries u = gen_two_sine(2000);
    std::vector<double> top;
    for (std::size_t k = 0; k < 2000; ++k) top.push_back(h.step(u.at(k))[3][0]);
    double max_diff = 0.0, scale = 0.0;
    for (std::size_t k = 1500; k + 21 < 2000; ++k) {
      max_diff = std::max(max_diff, std::abs(top[k + 21] - top[k]));
      scale = std::max(scale, std::abs(top[k]));
    }
    CHECK(max_diff < 1e-6 * scale);
  }
  SUBCASE("adaptive conceptors stay in range") {
    Hierarchy h(t, 4, p, true);
    const TimeSeries u = distort(gen_two_sine(1000), {0.3, 0.0, 0});
    for (std::size_t k = 0; k < 1000; ++k) h.step(u.at(k));
    for (std::size_t i = 0; i < 4; ++i)
      for (double v : h.layer(i).c_adapt.c) CHECK((v >= 0.0 && v <= 1.0));
  }
  SUBCASE("invalid") {
    CHECK_THROWS_AS(Hierarchy(t, 0, p, true), Error);
    RfcTraining untrained{rfc_init(reference_config()), t.c_target};
    CHECK_THROWS_AS(Hierarchy(untrained, 2, p, true), Error);
  }
}
