#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "varadhan/convex_duality.hpp"
#include "varadhan/error.hpp"
#include "varadhan/functionals.hpp"

using namespace vf;

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kKlThreeQuarters = 0.13081203594113696;

std::vector<double> weights(const ProbabilityMeasure& mu) { return {mu.weights().begin(), mu.weights().end()}; }

}  // namespace

TEST_CASE("kl_divergence examples") {
  auto uniform = make_measure({0.5, 0.5});
  CHECK(kl_divergence(uniform, uniform) == 0.0);
  auto mu = ProbabilityMeasure(uniform.space(), {0.75, 0.25});
  CHECK(kl_divergence(mu, uniform) == doctest::Approx(kKlThreeQuarters).epsilon(1e-14));
  CHECK(oracle::kl({0.75, 0.25}, {0.5, 0.5}) == doctest::Approx(kKlThreeQuarters).epsilon(1e-14));
  CHECK(kl_divergence(uniform, ProbabilityMeasure(uniform.space(), {1.0, 0.0})) == kInfinity);
  CHECK(kl_divergence(ProbabilityMeasure(uniform.space(), {1.0, 0.0}), uniform) ==
        doctest::Approx(kLn2).epsilon(1e-14));
}

TEST_CASE("kl_divergence matches the summation oracle") {
  std::mt19937_64 rng(73);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng() % 10;
    auto a = oracle::random_simplex(rng, m, 0.0), b = oracle::random_simplex(rng, m, 0.001);
    auto nu = make_measure(b);
    auto mu = ProbabilityMeasure(nu.space(), weights(make_measure(a)));
    CHECK(kl_divergence(mu, nu) == doctest::Approx(oracle::kl(weights(mu), weights(nu))).epsilon(1e-10));
    CHECK(kl_divergence(mu, nu) >= 0.0);
  }
}

TEST_CASE("exponential_tilt examples") {
  auto nu = make_measure({0.5, 0.5});
  auto t = exponential_tilt(nu, BoundedFunction(nu.space(), {std::log(3.0), 0.0}));
  CHECK(t[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(t[1] == doctest::Approx(0.25).epsilon(1e-15));
  auto c = exponential_tilt(nu, BoundedFunction::constant(nu.space(), 3.7));
  CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-15));
  auto dirac = make_measure({1.0, 0.0});
  auto d = exponential_tilt(dirac, BoundedFunction(dirac.space(), {-4.0, 40.0}));
  CHECK(d[0] == 1.0);
  CHECK(d[1] == 0.0);

  std::mt19937_64 rng(79);
  for (int k = 0; k < 100; ++k) {
    const std::size_t m = 1 + rng() % 10;
    auto w = oracle::random_simplex(rng, m, 0.0);
    auto f = oracle::random_values(rng, m, -5, 5);
    auto mu = make_measure(w);
    auto tilt = exponential_tilt(mu, BoundedFunction(mu.space(), f));
    auto expect = oracle::tilt(weights(mu), f);
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(tilt[i] - expect[i]) <= 1e-14);
  }
}

TEST_CASE("conjugate_J examples") {
  auto nu = make_measure({0.5, 0.5});
  auto L = log_integral(nu);

  auto at_base = conjugate_J(L, nu);
  CHECK(std::abs(at_base.value) <= 1e-12);
  CHECK(at_base.converged);
  const auto& f0 = std::get<BoundedFunction>(at_base.maximizer);
  CHECK(std::abs(f0.max()) <= 1e-8);
  CHECK(std::abs(f0.min()) <= 1e-8);

  auto mu = ProbabilityMeasure(nu.space(), {0.75, 0.25});
  auto r = conjugate_J(L, mu);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(kKlThreeQuarters).epsilon(1e-9));
  const auto& fm = std::get<BoundedFunction>(r.maximizer);
  // log(dmu/dnu) = (log 1.5, log 0.5), pinned to mean zero.
  const double half_log3 = 0.5 * std::log(3.0);
  CHECK(fm[0] == doctest::Approx(half_log3).epsilon(1e-6));
  CHECK(fm[1] == doctest::Approx(-half_log3).epsilon(1e-6));

  AscentOptions closed;
  closed.closed_form = true;
  auto boundary = conjugate_J(L, ProbabilityMeasure(nu.space(), {1.0, 0.0}), closed);
  CHECK(boundary.value == doctest::Approx(kLn2).epsilon(1e-14));
  CHECK(std::holds_alternative<std::monostate>(boundary.maximizer));
}

TEST_CASE("conjugate_J without closed form diverges to the value cap off the support") {
  auto L = log_integral(make_measure({1.0, 0.0}));
  auto r = conjugate_J(L, ProbabilityMeasure(L.space(), {0.5, 0.5}));
  CHECK(r.value == kInfinity);
}

TEST_CASE("conjugate_J matches KL and is gauge invariant") {
  std::mt19937_64 rng(83);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + rng() % 9;
    auto nu = make_measure(oracle::random_simplex(rng, m, 0.01));
    auto mu = ProbabilityMeasure(nu.space(), oracle::random_simplex(rng, m, 0.01));
    auto L = log_integral(nu);
    AscentOptions mean_pin, first_pin;
    first_pin.gauge = Gauge::FirstPoint;
    auto a = conjugate_J(L, mu, mean_pin);
    auto b = conjugate_J(L, mu, first_pin);
    CHECK(a.converged);
    CHECK(std::abs(a.value - oracle::kl(weights(mu), weights(nu))) <= 1e-6);
    CHECK(std::abs(a.value - b.value) <= 1e-9);
    CHECK(a.value >= -1e-9);
    CHECK(a.gradient_norm <= mean_pin.grad_tolerance);
  }
}

TEST_CASE("finite-difference gradients reach the same conjugate") {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + rng() % 6;
    auto nu = make_measure(oracle::random_simplex(rng, m, 0.05));
    auto mu = ProbabilityMeasure(nu.space(), oracle::random_simplex(rng, m, 0.05));
    AscentOptions fd;
    fd.exact_gradient = false;
    fd.grad_tolerance = 1e-7;
    auto r = conjugate_J(log_integral(nu), mu, fd);
    CHECK(std::abs(r.value - oracle::kl(weights(mu), weights(nu))) <= 1e-6);
  }
}

TEST_CASE("weak duality sandwich") {
  std::mt19937_64 rng(97);
  for (int t = 0; t < 60; ++t) {
    const std::size_t m = 2 + rng() % 8;
    auto nu = make_measure(oracle::random_simplex(rng, m, 0.01));
    auto mu = ProbabilityMeasure(nu.space(), oracle::random_simplex(rng, m, 0.0));
    auto L = log_integral(nu);
    const double j = conjugate_J(L, mu).value;
    for (int k = 0; k < 10; ++k) {
      BoundedFunction f(nu.space(), oracle::random_values(rng, m, -5, 5));
      CHECK(expectation(mu, f) - j <= L(f) + 1e-6);
    }
  }
}

TEST_CASE("recover_L_from_J examples") {
  auto nu = make_measure({0.5, 0.5});
  auto r = recover_L_from_J(relative_entropy(nu), 0.0, BoundedFunction(nu.space(), {std::log(3.0), 0.0}));
  CHECK(std::abs(r.value - kLn2) <= 1e-6);
  const auto& m = std::get<ProbabilityMeasure>(r.maximizer);
  CHECK(m[0] == doctest::Approx(0.75).epsilon(1e-5));

  // J = 0 at a single measure, infinite elsewhere.
  auto space = nu.space();
  auto mu0 = ProbabilityMeasure(space, {0.3, 0.7});
  MeasureRate indicator{
      [mu0](const ProbabilityMeasure& mu) { return total_variation(mu, mu0) == 0.0 ? 0.0 : kInfinity; },
      nullptr,
      {mu0}};
  BoundedFunction f(space, {2.0, -1.0});
  auto d = recover_L_from_J(indicator, 1.5, f);
  CHECK(d.value == doctest::Approx(1.5 + expectation(mu0, f)).epsilon(1e-12));

  for (double c : {-2.0, 0.0, 3.25}) {
    auto rc = recover_L_from_J(relative_entropy(nu), 0.5, BoundedFunction::constant(space, c));
    CHECK(std::abs(rc.value - (0.5 + c)) <= 1e-9);
  }
}

TEST_CASE("recovery from relative entropy matches the tilt") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 2 + rng() % 8;
    auto w = oracle::random_simplex(rng, m, 0.01);
    auto nu = make_measure(w);
    auto fv = oracle::random_values(rng, m, -5, 5);
    BoundedFunction f(nu.space(), fv);
    auto r = recover_L_from_J(relative_entropy(nu), 0.0, f);
    CHECK(std::abs(r.value - oracle::log_integral(weights(nu), fv)) <= 1e-6);
    auto tilt = ProbabilityMeasure(nu.space(), oracle::tilt(weights(nu), fv));
    CHECK(total_variation(std::get<ProbabilityMeasure>(r.maximizer), tilt) <= 1e-5);
  }
}

TEST_CASE("ascent options are validated") {
  AscentOptions bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  AscentOptions bad_step;
  bad_step.step_init = -1.0;
  CHECK_THROWS_AS(bad_step.validate(), Error);
  CHECK_NOTHROW(AscentOptions{}.validate());
}

TEST_CASE("recovery with an everywhere-infinite J is rejected") {
  auto nu = make_measure({0.5, 0.5});
  MeasureRate never{[](const ProbabilityMeasure&) { return kInfinity; }, nullptr, {}};
  try {
    recover_L_from_J(never, 0.0, BoundedFunction::zero(nu.space()));
    FAIL("expected InfeasibleJ");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleJ);
  }
}

TEST_CASE("recovery without an exact gradient") {
  std::mt19937_64 rng(137);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 2 + rng() % 6;
    auto w = oracle::random_simplex(rng, m, 0.01);
    auto nu = make_measure(w);
    auto fv = oracle::random_values(rng, m, -3, 3);
    MeasureRate rate = relative_entropy(nu);
    rate.gradient = nullptr;
    AscentOptions opts;
    opts.exact_gradient = false;
    opts.step_init = 0.5;
    auto r = recover_L_from_J(rate, 0.0, BoundedFunction(nu.space(), fv), opts);
    CHECK(std::abs(r.value - oracle::log_integral(weights(nu), fv)) <= 1e-6);
  }
}
