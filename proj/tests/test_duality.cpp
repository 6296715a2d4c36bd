#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "varadhan/duality.hpp"
#include "varadhan/error.hpp"
#include "varadhan/functionals.hpp"

using namespace vf;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn4 = 1.3862943611198906;
constexpr double kLn4Over3 = 0.28768207245178093;
constexpr double kGapUniform = 0.3132616875182228;

RateFunction random_rate(std::mt19937_64& rng, std::size_t m) {
  auto values = oracle::random_values(rng, m, 0.0, 10.0);
  for (double& v : values)
    if (rng() % 5 == 0) v = kInfinity;
  values[rng() % m] = 0.0;
  return RateFunction(FiniteSpace::discrete(m), values);
}

}  // namespace

TEST_CASE("pit schedule") {
  auto s = PitSchedule::doubling();
  CHECK(s.depths.size() == 41);
  CHECK(s.depths.front() == 1.0);
  CHECK(s.depths.back() == std::ldexp(1.0, 40));
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS((PitSchedule{{1.0, 1.0}}).validate(), Error);
  CHECK_THROWS_AS((PitSchedule{{2.0}}).validate(), Error);
  CHECK_THROWS_AS((PitSchedule{{1.0, 2.0}, -1.0}).validate(), Error);

  auto pit = pit_function(FiniteSpace::discrete(3), 1, 8.0);
  CHECK(pit == BoundedFunction(pit.space(), {-8.0, 0.0, -8.0}));
}

TEST_CASE("dual_rate_at examples") {
  auto space = FiniteSpace::discrete(2);
  auto sup = sup_form(RateFunction(space, {0.0, 1.0}), 0.0);
  CHECK(std::abs(dual_rate_at(sup, 0).value) <= 1e-12);
  CHECK(dual_rate_at(sup, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dual_rate_at(sup, "x2").value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dual_rate_at(sup, 1).monotone);

  auto li = log_integral(make_measure({0.5, 0.5}));
  for (std::size_t x : {0, 1}) {
    auto d = dual_rate_at(li, x);
    CHECK(d.value == doctest::Approx(kLn2).epsilon(1e-12));
    CHECK_FALSE(d.convergence.divergent);
  }

  auto half = FiniteSpace::half_line({0.0, 1.0, 2.0, 4.0});
  auto tail = tail_limsup(half);
  for (std::size_t x = 0; x < 4; ++x) {
    auto d = dual_rate_at(tail, x);
    CHECK(d.value == kInfinity);
    CHECK(d.convergence.divergent);
  }
  CHECK_THROWS_AS(dual_rate_at(sup, "nowhere"), Error);
}

TEST_CASE("dual_rate examples") {
  auto space = FiniteSpace::discrete(3);
  RateFunction rate(space, {0.0, 0.3, 2.5});
  auto r0 = dual_rate(sup_form(rate, 0.0));
  auto r7 = dual_rate(sup_form(rate, 7.0));
  CHECK(r7.base_value == 7.0);
  CHECK(r0.base_value == 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(r0.rate[i] - rate[i]) <= 1e-9);
    CHECK(std::abs(r7.rate[i] - rate[i]) <= 1e-9);
  }

  auto li = dual_rate(log_integral(make_measure({0.25, 0.75})));
  CHECK(li.rate[0] == doctest::Approx(kLn4).epsilon(1e-12));
  CHECK(li.rate[1] == doctest::Approx(kLn4Over3).epsilon(1e-12));

  auto tail = dual_rate(tail_limsup(FiniteSpace::half_line({0.0, 1.0})));
  CHECK(tail.rate.all_infinite());
  for (const auto& c : tail.convergence) CHECK(c.divergent);
}

TEST_CASE("pit estimates are nondecreasing in depth") {
  std::mt19937_64 rng(53);
  auto sched = PitSchedule::doubling();
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = 2 + rng() % 8;
    auto mu = make_measure(oracle::random_simplex(rng, m, 0.0));
    std::vector<FunctionalHandle> handles{log_integral(mu), ldp_term(mu, 1 + rng() % 100),
                                          sup_form(random_rate(rng, m), 1.5)};
    for (const auto& L : handles) {
      const auto space = L.space();
      for (std::size_t x = 0; x < m; ++x) {
        double prev = -kInfinity;
        for (double M : sched.depths) {
          const double est = L.base_value() - L(pit_function(space, x, M));
          CHECK(est >= prev - 1e-12);
          prev = est;
        }
        CHECK(dual_rate_at(L, x).monotone);
      }
    }
  }
}

TEST_CASE("sup_form round trip") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> l0(-5.0, 5.0);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 1 + rng() % 50;
    auto rate = random_rate(rng, m);
    const double base = l0(rng);
    auto report = dual_rate(sup_form(rate, base));
    CHECK(std::abs(report.base_value - base) <= 1e-9);
    for (std::size_t i = 0; i < m; ++i) {
      if (rate[i] == kInfinity) {
        CHECK(report.rate[i] == kInfinity);
        CHECK(report.convergence[i].divergent);
      } else {
        CHECK(std::abs(report.rate[i] - rate[i]) <= 1e-9);
        CHECK_FALSE(report.convergence[i].divergent);
      }
    }
  }
}

TEST_CASE("reconstruct examples") {
  auto space = FiniteSpace::discrete(2);
  CHECK(reconstruct(RateFunction(space, {0.0, 1.0}), 0.0, BoundedFunction(space, {0.2, 1.5})) == 0.5);

  auto s3 = FiniteSpace::discrete(3);
  RateFunction unique_zero(s3, {2.0, 0.0, 3.0});
  for (double c : {0.0, 0.5, 4.0})
    CHECK(reconstruct(unique_zero, 1.0, BoundedFunction(s3, {0.0, c, 0.0})) == 1.0 + c);

  RateFunction dirac(s3, {kInfinity, 0.0, kInfinity});
  CHECK(reconstruct(dirac, -2.0, BoundedFunction(s3, {9.0, 0.25, -9.0})) == -1.75);

  CHECK_THROWS_AS(reconstruct(RateFunction(s3, {kInfinity, kInfinity, kInfinity}), 0.0,
                              BoundedFunction::zero(s3)),
                  Error);
}

TEST_CASE("representation gap examples") {
  auto li = log_integral(make_measure({0.5, 0.5}));
  const double gap = representation_gap(li, BoundedFunction(li.space(), {1.0, 0.0}));
  CHECK(gap == doctest::Approx(kGapUniform).epsilon(1e-10));

  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + rng() % 8;
    auto L = sup_form(random_rate(rng, m), 3.0);
    auto dual = dual_rate(L);
    for (int k = 0; k < 10; ++k) {
      BoundedFunction f(L.space(), oracle::random_values(rng, m, -5, 5));
      CHECK(std::abs(representation_gap(L, dual, f)) <= 1e-9);
    }
    // A constant F has the same gap as F = 0: min of the finite rate, here 0.
    CHECK(std::abs(representation_gap(L, dual, BoundedFunction::constant(L.space(), 2.0))) <= 1e-9);
  }
}

TEST_CASE("gap is never negative and detects non-maximality") {
  std::mt19937_64 rng(67);
  int detected = 0, setups = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = 2 + rng() % 9;
    auto mu = make_measure(oracle::random_simplex(rng, m, 0.01));
    auto li = log_integral(mu);
    auto sup = sup_form(random_rate(rng, m), 0.0);
    auto dli = dual_rate(li);
    auto dsup = dual_rate(sup);
    BoundedFunction f(li.space(), oracle::random_values(rng, m, -5, 5));
    const double g_li = representation_gap(li, dli, f);
    const double g_sup = representation_gap(sup, dsup, f);
    CHECK(g_li >= -1e-9);
    CHECK(g_sup >= -1e-9);
    CHECK(g_sup <= 1e-9);
    ++setups;
    if (g_li > 0.01) ++detected;
  }
  CHECK(setups == 500);
  CHECK(detected > 0);
}

TEST_CASE("computed rate of a sup-form handle has minimum zero") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 50; ++t) {
    const std::size_t m = 1 + rng() % 20;
    auto report = dual_rate(sup_form(random_rate(rng, m), 0.0));
    CHECK(std::abs(report.rate.min_finite()) <= PitSchedule{}.stall_tolerance);
  }
}

TEST_CASE("sublevel sets") {
  auto s3 = FiniteSpace::discrete(3);
  RateFunction rate(s3, {0.0, 1.0, kInfinity});
  CHECK(sublevel_set(rate, 0.5).points == std::vector<std::size_t>{0});
  CHECK(sublevel_set(rate, 1.0).points == std::vector<std::size_t>{0, 1});
  CHECK(sublevel_set(rate, 1.0).diameter == 1.0);
  RateFunction dirac(s3, {kInfinity, 0.0, kInfinity});
  for (double a : {1e-6, 1.0, 1e6}) {
    CHECK(sublevel_set(dirac, a).points == std::vector<std::size_t>{1});
    CHECK(sublevel_set(dirac, a).diameter == 0.0);
  }
  CHECK_THROWS_AS(sublevel_set(rate, 0.0), Error);

  auto line = FiniteSpace::line({0.0, 0.25, 0.5, 1.0});
  CHECK(sublevel_set(RateFunction(line, {3.0, 0.0, 0.2, 5.0}), 1.0).diameter == 0.25);
}
