#include "varadhan/convex_duality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varadhan/error.hpp"
#include "log.hpp"
#include "varadhan/log_sum_exp.hpp"

namespace vf {

namespace {

// Below this the line search has nothing left to try.
constexpr double kMinStep = 1e-20;
constexpr double kArmijo = 1e-4;

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void pin_gauge(std::vector<double>& f, Gauge gauge) {
  const double shift = gauge == Gauge::MeanZero
                           ? std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size())
                           : f.front();
  for (double& v : f) v -= shift;
}

// Gradient direction restricted to the gauge slice.
void project(std::vector<double>& g, Gauge gauge) {
  if (gauge == Gauge::MeanZero) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    for (double& v : g) v -= mean;
  } else {
    g.front() = 0.0;
  }
}

}  // namespace

void AscentOptions::validate() const {
  if (!(step_init > 0.0) || !(grad_tolerance > 0.0) || !(value_cap > 0.0) ||
      !(finite_difference_h > 0.0) || max_iters < 1)
    throw Error(ErrorCode::InvalidArgument, "ascent options must be positive with max_iters >= 1");
}

double kl_divergence(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  require_same_space(mu.space(), nu.space());
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0.0) continue;
    if (nu[i] == 0.0) return kInfinity;
    s += mu[i] * (mu.log_weights()[i] - nu.log_weights()[i]);
  }
  // Rounding can leave a tiny negative sum when mu == nu.
  return std::max(s, 0.0);
}

ProbabilityMeasure exponential_tilt(const ProbabilityMeasure& nu, const BoundedFunction& f) {
  require_same_space(nu.space(), f.space());
  std::vector<double> lw(nu.size());
  for (std::size_t i = 0; i < lw.size(); ++i) lw[i] = f[i] + nu.log_weights()[i];
  return ProbabilityMeasure::from_log_weights(nu.space(), std::move(lw));
}

double total_variation(const ProbabilityMeasure& a, const ProbabilityMeasure& b) {
  require_same_space(a.space(), b.space());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

// --- conjugate_J -------------------------------------------------------------

ConjugateReport conjugate_J(const FunctionalHandle& functional, const ProbabilityMeasure& mu,
                            const AscentOptions& opts) {
  opts.validate();
  require_same_space(functional.space(), mu.space());
  if (!functional.claims_convex())
    logger().info("conjugate_J: '{}' does not claim convexity; the result is a conjugate but "
                  "need not represent the functional", functional.name());

  if (opts.closed_form) {
    if (auto v = functional.closed_form_conjugate(mu)) {
      return ConjugateReport{*v, std::monostate{}, 0, true, 0.0};
    }
  }

  const SpacePtr& space = functional.space();
  const std::size_t m = space->size();
  const double base = functional.base_value();

  auto objective = [&](const std::vector<double>& f) {
    return expectation(mu, BoundedFunction(space, f)) - functional(BoundedFunction(space, f)) + base;
  };
  auto gradient = [&](const std::vector<double>& f) {
    std::vector<double> g(m);
    std::optional<std::vector<double>> exact;
    if (opts.exact_gradient) exact = functional.gradient(BoundedFunction(space, f));
    if (exact) {
      for (std::size_t i = 0; i < m; ++i) g[i] = mu[i] - (*exact)[i];
    } else {
      const double h = opts.finite_difference_h;
      std::vector<double> probe(f);
      for (std::size_t i = 0; i < m; ++i) {
        probe[i] = f[i] + h;
        const double up = functional(BoundedFunction(space, probe));
        probe[i] = f[i] - h;
        const double down = functional(BoundedFunction(space, probe));
        probe[i] = f[i];
        g[i] = mu[i] - (up - down) / (2.0 * h);
      }
    }
    project(g, opts.gauge);
    return g;
  };

  std::vector<double> f(m, 0.0);
  double value = objective(f);
  std::vector<double> g = gradient(f);
  double step = opts.step_init;
  std::vector<double> prev_f, prev_g;

  ConjugateReport report;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const double gnorm = norm(g);
    report.gradient_norm = gnorm;
    if (gnorm <= opts.grad_tolerance) {
      report.converged = true;
      break;
    }

    // Barzilai-Borwein trial step; y = g - g_prev points downhill for a
    // concave objective, hence the sign.
    double trial = 2.0 * step;
    if (!prev_f.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double s = f[i] - prev_f[i];
        ss += s * s;
        sy += s * (g[i] - prev_g[i]);
      }
      if (sy < 0.0 && ss > 0.0) trial = ss / -sy;
    } else {
      trial = opts.step_init;
    }

    std::vector<double> next(m);
    double next_value = value;
    bool accepted = false;
    for (step = trial; step >= kMinStep; step *= 0.5) {
      for (std::size_t i = 0; i < m; ++i) next[i] = f[i] + step * g[i];
      pin_gauge(next, opts.gauge);
      next_value = objective(next);
      if (std::isfinite(next_value) && next_value >= value + kArmijo * step * gnorm * gnorm) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      logger().debug("conjugate_J: line search exhausted at iteration {}, |g| = {}", iter, gnorm);
      break;
    }

    prev_f = std::move(f);
    prev_g = std::move(g);
    f = std::move(next);
    value = next_value;
    if (value > opts.value_cap) {
      report.value = kInfinity;
      report.iterations = iter + 1;
      report.converged = true;
      report.gradient_norm = norm(gradient(f));
      return report;
    }
    g = gradient(f);
  }
  if (iter == opts.max_iters) report.gradient_norm = norm(g);

  report.value = value;
  report.iterations = iter;
  report.maximizer = BoundedFunction(space, std::move(f));
  logger().debug("conjugate_J: value {} after {} iterations, converged {}", report.value,
                 report.iterations, report.converged);
  return report;
}

// --- recover_L_from_J --------------------------------------------------------

MeasureRate relative_entropy(const ProbabilityMeasure& nu) {
  MeasureRate rate;
  rate.value = [nu](const ProbabilityMeasure& mu) { return kl_divergence(mu, nu); };
  rate.gradient = [nu](const ProbabilityMeasure& mu) {
    std::vector<double> g(mu.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      g[i] = mu.log_weights()[i] - nu.log_weights()[i] + 1.0;
    return g;
  };
  rate.anchors.push_back(nu);
  return rate;
}

namespace {

struct MirrorState {
  ProbabilityMeasure mu;
  double objective;
};

// Derivatives of J along e_i - mu, which stay inside the simplex. Central
// differences where the backward point is still a measure, forward otherwise.
std::vector<double> tangent_gradient(const MeasureRate& rate, const ProbabilityMeasure& mu,
                                     double j_here, double h) {
  const std::size_t m = mu.size();
  std::vector<double> g(m, 0.0);
  auto moved = [&](std::size_t i, double t) {
    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k) w[k] = (1.0 - t) * mu[k];
    w[i] += t;
    for (double& x : w) x = std::max(x, 0.0);
    return make_measure(mu.space(), std::move(w));
  };
  for (std::size_t i = 0; i < m; ++i) {
    const double up = rate.value(moved(i, h));
    if (mu[i] * (1.0 + h) - h >= 0.0) {
      const double down = rate.value(moved(i, -h));
      g[i] = (up - down) / (2.0 * h);
    } else {
      g[i] = (up - j_here) / h;
    }
  }
  return g;
}

}  // namespace

ConjugateReport recover_L_from_J(const MeasureRate& rate, double base_value,
                                 const BoundedFunction& f, const AscentOptions& opts) {
  opts.validate();
  if (!rate.value) throw Error(ErrorCode::InvalidArgument, "recover_L_from_J: rate has no evaluator");
  const SpacePtr& space = f.space();
  const std::size_t m = space->size();

  auto objective = [&](const ProbabilityMeasure& mu) {
    const double j = rate.value(mu);
    return j == kInfinity ? -kInfinity : expectation(mu, f) - j;
  };

  // Starting candidates. Anchors are nudged into the interior by a 1e-9
  // uniform mass when J stays finite there.
  std::vector<ProbabilityMeasure> candidates;
  const std::vector<double> uniform(m, 1.0 / static_cast<double>(m));
  for (const auto& anchor : rate.anchors) {
    require_same_space(space, anchor.space());
    constexpr double kInterior = 1e-9;
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = (1.0 - kInterior) * anchor[i] + kInterior * uniform[i];
    candidates.push_back(make_measure(space, std::move(w)));
    candidates.push_back(anchor);
  }
  candidates.push_back(make_measure(space, uniform));

  std::optional<MirrorState> state;
  for (auto& c : candidates) {
    const double v = objective(c);
    if (std::isfinite(v) && (!state || v > state->objective)) state = MirrorState{c, v};
  }
  if (!state) {
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> w(m, 0.0);
      w[i] = 1.0;
      auto vertex = make_measure(space, std::move(w));
      const double v = objective(vertex);
      if (std::isfinite(v) && (!state || v > state->objective)) state = MirrorState{vertex, v};
    }
  }
  if (!state)
    throw Error(ErrorCode::InfeasibleJ, "J is infinite at every starting measure");

  ConjugateReport report;
  double step = opts.step_init;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const ProbabilityMeasure& mu = state->mu;
    std::vector<double> grad_j;
    if (opts.exact_gradient && rate.gradient) {
      grad_j = rate.gradient(mu);
    } else {
      grad_j = tangent_gradient(rate, mu, rate.value(mu), opts.finite_difference_h);
    }

    // Ascent direction on the support of mu, centred under mu.
    std::vector<double> g(m, 0.0);
    bool finite = true;
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mu[i] == 0.0) continue;
      g[i] = f[i] - grad_j[i];
      if (!std::isfinite(g[i])) finite = false;
      mean += mu[i] * g[i];
    }
    if (!finite) {
      // J has no finite slope out of this point: nothing to ascend along.
      report.converged = true;
      break;
    }
    double spread = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (mu[i] == 0.0) continue;
      g[i] -= mean;
      spread += mu[i] * g[i] * g[i];
    }
    spread = std::sqrt(spread);
    report.gradient_norm = spread;
    if (spread <= opts.grad_tolerance) {
      report.converged = true;
      break;
    }

    bool accepted = false;
    const double first = iter == 0 ? opts.step_init : std::min(2.0 * step, 1e6);
    for (double trial = first; trial >= kMinStep; trial *= 0.5) {
      std::vector<double> lw(m);
      for (std::size_t i = 0; i < m; ++i) lw[i] = mu.log_weights()[i] + trial * g[i];
      auto next = ProbabilityMeasure::from_log_weights(space, std::move(lw));
      double gain = 0.0;
      for (std::size_t i = 0; i < m; ++i) gain += g[i] * (next[i] - mu[i]);
      const double v = objective(next);
      if (std::isfinite(v) && v >= state->objective + kArmijo * gain) {
        state = MirrorState{std::move(next), v};
        step = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.converged = true;
      break;
    }
  }

  // Snap coordinates that have all but vanished onto the boundary.
  constexpr double kSnap = 1e-7;
  const auto& w = state->mu.weights();
  if (std::any_of(w.begin(), w.end(), [](double x) { return x > 0.0 && x < kSnap; })) {
    std::vector<double> snapped(w.begin(), w.end());
    for (double& x : snapped)
      if (x < kSnap) x = 0.0;
    auto candidate = make_measure(space, std::move(snapped));
    const double v = objective(candidate);
    if (std::isfinite(v) && v >= state->objective - 1e-12) state = MirrorState{candidate, v};
  }

  report.value = base_value + state->objective;
  report.iterations = iter;
  report.maximizer = state->mu;
  return report;
}

}  // namespace vf
