#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "varadhan/functionals.hpp"
#include "varadhan/space.hpp"

namespace vf {

/// Pins the translation freedom F -> F + c of the conjugate objective.
enum class Gauge { MeanZero, FirstPoint };

struct AscentOptions {
  double step_init = 1.0;
  int max_iters = 10000;
  double grad_tolerance = 1e-8;
  double value_cap = 1e6;
  double finite_difference_h = 1e-6;
  /// Use the handle's (or rate's) exact gradient when it has one.
  bool exact_gradient = true;
  /// Short-circuit conjugate_J through the handle's closed form, if any.
  bool closed_form = false;
  Gauge gauge = Gauge::MeanZero;

  void validate() const;
};

using Maximizer = std::variant<std::monostate, BoundedFunction, ProbabilityMeasure>;

struct ConjugateReport {
  double value = 0.0;  // +inf when the objective ran past value_cap
  Maximizer maximizer;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

/// J(mu) = L(0) + sup_F { <mu, F> - L(F) }
///
/// Gradient ascent with backtracking over real vectors F, gauge pinned after
/// every step. The first trial step of each iteration is the Barzilai-Borwein
/// step, falling back to doubling the last accepted step. A run that stops at
/// max_iters returns converged = false with the best value seen.
ConjugateReport conjugate_J(const FunctionalHandle& functional, const ProbabilityMeasure& mu,
                            const AscentOptions& opts = {});

/// KL(mu || nu), +inf unless mu << nu.
double kl_divergence(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

/// The measure proportional to e^F nu.
ProbabilityMeasure exponential_tilt(const ProbabilityMeasure& nu, const BoundedFunction& f);

/// A rate J on the probability simplex of one space.
struct MeasureRate {
  std::function<double(const ProbabilityMeasure&)> value;
  /// Optional: the Euclidean gradient of J. Entries off the support of the
  /// argument are ignored.
  std::function<std::vector<double>(const ProbabilityMeasure&)> gradient;
  /// Measures where J is known to be finite; used as starting points.
  std::vector<ProbabilityMeasure> anchors;
};

/// J(mu) = KL(mu || nu) with its exact gradient log(mu / nu) + 1.
MeasureRate relative_entropy(const ProbabilityMeasure& nu);

/// L(F) = L0 + sup_mu { <mu, F> - J(mu) }
///
/// Entropic mirror ascent: mu <- mu * exp(step * g) / Z, with g the gradient
/// of the objective (finite differences along e_i - mu when J has none).
/// Throws InfeasibleJ if J is infinite at every starting candidate (the
/// anchors, the uniform measure, the vertices).
ConjugateReport recover_L_from_J(const MeasureRate& rate, double base_value,
                                 const BoundedFunction& f, const AscentOptions& opts = {});

/// Total-variation distance: half the l1 distance of the weights.
double total_variation(const ProbabilityMeasure& a, const ProbabilityMeasure& b);

}  // namespace vf
