#include "varadhan/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "varadhan/error.hpp"

namespace vf {

namespace {

constexpr double kValueRange = 5.0;
constexpr double kPerturbationRange = 5.0;
constexpr double kShiftRange = 10.0;
constexpr double kThetas[] = {0.5, 0.25, 0.125};

struct Trial {
  std::vector<BoundedFunction> functions;
  std::vector<double> scalars;
};

// One trial's inputs depend only on (seed, trial index).
class TrialSampler {
 public:
  TrialSampler(SpacePtr space, std::uint64_t seed, int trial)
      : space_(std::move(space)), rng_(seed + static_cast<std::uint64_t>(trial)) {}

  BoundedFunction function() {
    std::uniform_real_distribution<double> dist(-kValueRange, kValueRange);
    std::vector<double> v(space_->size());
    for (double& x : v) x = dist(rng_);
    return BoundedFunction(space_, std::move(v));
  }

  BoundedFunction above(const BoundedFunction& f) {
    std::uniform_real_distribution<double> dist(0.0, kPerturbationRange);
    std::vector<double> v(f.values().begin(), f.values().end());
    for (double& x : v) x += dist(rng_);
    return BoundedFunction(space_, std::move(v));
  }

  double shift() { return std::uniform_real_distribution<double>(-kShiftRange, kShiftRange)(rng_); }

 private:
  SpacePtr space_;
  std::mt19937_64 rng_;
};

using Sampler = std::function<Trial(TrialSampler&)>;
using Amount = std::function<double(const FunctionalHandle&, const Trial&)>;

double monotone_amount(const FunctionalHandle& L, const Trial& t) {
  return L(t.functions[0]) - L(t.functions[1]);
}

double monotone_lattice_amount(const FunctionalHandle& L, const Trial& t) {
  const auto& f = t.functions[0];
  const auto& g = t.functions[1];
  return std::max(L(f), L(g)) - L(pointwise_max(f, g));
}

double translation_amount(const FunctionalHandle& L, const Trial& t) {
  const double c = t.scalars[0];
  return std::abs(L(t.functions[0] + c) - L(t.functions[0]) - c);
}

double maximal_amount(const FunctionalHandle& L, const Trial& t) {
  const auto& f = t.functions[0];
  const auto& g = t.functions[1];
  return std::abs(L(pointwise_max(f, g)) - std::max(L(f), L(g)));
}

double inf_gap_amount(const FunctionalHandle& L, const Trial& t) {
  const auto& f = t.functions[0];
  const auto& g = t.functions[1];
  return inf_difference(f, g) - (L(f) - L(g));
}

double lipschitz_amount(const FunctionalHandle& L, const Trial& t) {
  const auto& f = t.functions[0];
  const auto& g = t.functions[1];
  const double diff = L(f) - L(g);
  return std::max(inf_difference(f, g) - diff, std::abs(diff) - sup_distance(f, g));
}

// Translation defect and the convexity chain bound, whichever is worse.
double remark_amount(const FunctionalHandle& phi, const Trial& t) {
  const auto& f = t.functions[0];
  const double c = t.scalars[0];
  const double shifted = phi(f + c);
  const double base = phi(f);
  const double doubled = phi(f.scaled(2.0));
  double amount = std::abs(shifted - base - c);
  for (double theta : kThetas)
    amount = std::max(amount, shifted - (base + c + theta * (doubled / 2.0 - base)));
  return amount;
}

Trial sample_pair(TrialSampler& s) { return Trial{{s.function(), s.function()}, {}}; }
Trial sample_ordered_pair(TrialSampler& s) {
  auto f = s.function();
  auto g = s.above(f);
  return Trial{{std::move(f), std::move(g)}, {}};
}
Trial sample_shift(TrialSampler& s) {
  auto f = s.function();
  const double c = s.shift();
  return Trial{{std::move(f)}, {c}};
}

struct PropertySpec {
  const char* name;
  Amount amount;
};

const PropertySpec kProperties[] = {
    {"monotone", monotone_amount},
    {"monotone_lattice", monotone_lattice_amount},
    {"translation", translation_amount},
    {"maximal", maximal_amount},
    {"lipschitz", lipschitz_amount},
    {"inf_gap", inf_gap_amount},
    {"const_preserving_translation", remark_amount},
};

const Amount& amount_for(const std::string& property) {
  for (const auto& p : kProperties)
    if (property == p.name) return p.amount;
  throw Error(ErrorCode::InvalidArgument, "no replayable property named '" + property + "'");
}

void record(CheckReport& report, Trial trial, double amount) {
  if (amount > report.tolerance) ++report.violations;
  if (amount > report.worst_violation) {
    report.worst_violation = amount;
    if (amount > report.tolerance) {
      report.witness = std::move(trial.functions);
      report.witness_scalars = std::move(trial.scalars);
    }
  }
}

CheckReport run_check(const char* property, const FunctionalHandle& L, int trials,
                      std::uint64_t seed, double tolerance, const Sampler& sample) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  CheckReport report;
  report.property = property;
  report.trials = trials;
  report.seed = seed;
  report.tolerance = tolerance;
  const Amount& amount = amount_for(property);
  for (int k = 0; k < trials; ++k) {
    TrialSampler sampler(L.space(), seed, k);
    Trial trial = sample(sampler);
    const double a = amount(L, trial);
    record(report, std::move(trial), a);
  }
  return report;
}

}  // namespace

CheckReport check_monotone(const FunctionalHandle& L, int trials, std::uint64_t seed,
                           double tolerance) {
  return run_check("monotone", L, trials, seed, tolerance, sample_ordered_pair);
}

CheckReport check_monotone_lattice(const FunctionalHandle& L, int trials, std::uint64_t seed,
                                   double tolerance) {
  return run_check("monotone_lattice", L, trials, seed, tolerance, sample_pair);
}

CheckReport check_translation(const FunctionalHandle& L, int trials, std::uint64_t seed,
                              double tolerance) {
  return run_check("translation", L, trials, seed, tolerance, sample_shift);
}

CheckReport check_maximal(const FunctionalHandle& L, int trials, std::uint64_t seed,
                          double tolerance) {
  return run_check("maximal", L, trials, seed, tolerance, sample_pair);
}

CheckReport check_maximal(const FunctionalHandle& L,
                          std::span<const std::pair<BoundedFunction, BoundedFunction>> pairs,
                          double tolerance) {
  if (pairs.empty()) throw Error(ErrorCode::InvalidArgument, "check_maximal: no pairs given");
  CheckReport report;
  report.property = "maximal";
  report.trials = static_cast<int>(pairs.size());
  report.tolerance = tolerance;
  for (const auto& [f, g] : pairs) {
    Trial trial{{f, g}, {}};
    const double a = maximal_amount(L, trial);
    record(report, std::move(trial), a);
  }
  return report;
}

CheckReport check_lipschitz(const FunctionalHandle& L, int trials, std::uint64_t seed,
                            double tolerance) {
  return run_check("lipschitz", L, trials, seed, tolerance, sample_pair);
}

CheckReport check_inf_gap(const FunctionalHandle& L, int trials, std::uint64_t seed,
                          double tolerance) {
  return run_check("inf_gap", L, trials, seed, tolerance, sample_pair);
}

SigmaReport check_sigma_continuity(const FunctionalHandle& L, const DecreasingSequence& sequence,
                                   double tolerance) {
  constexpr double kMaxResidual = 1e-6;
  if (sequence.terms.empty()) throw Error(ErrorCode::InvalidArgument, "sequence has no terms");
  if (sequence.residual > kMaxResidual)
    throw Error(ErrorCode::SequenceNotVanishing,
                "last term is still " + format_number(sequence.residual) + " away from zero");

  SigmaReport out;
  out.base_value = L.base_value();
  out.trajectory.reserve(sequence.terms.size());
  for (const auto& term : sequence.terms) out.trajectory.push_back(L(term));

  CheckReport& report = out.check;
  report.property = "sigma_continuity";
  report.trials = static_cast<int>(sequence.terms.size());
  report.tolerance = tolerance;
  const double amount =
      std::max(0.0, std::abs(out.trajectory.back() - out.base_value) - sequence.residual);
  report.worst_violation = amount;
  if (amount > tolerance) {
    report.violations = 1;
    report.witness = {sequence.terms.back()};
    report.witness_scalars = {sequence.residual};
  }
  return out;
}

CheckReport check_const_preserving_implies_translation(const FunctionalHandle& phi, int trials,
                                                       std::uint64_t seed, double tolerance) {
  if (!phi.claims_convex())
    throw Error(ErrorCode::PreconditionFailed, "'" + phi.name() + "' does not claim convexity");

  std::vector<double> constants = {0.0};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-kShiftRange, kShiftRange);
  for (int k = 0; k < 8; ++k) constants.push_back(dist(rng));
  for (double c : constants) {
    const double value = phi(BoundedFunction::constant(phi.space(), c));
    if (std::abs(value - c) > tolerance)
      throw Error(ErrorCode::PreconditionFailed,
                  "Phi(" + format_number(c) + ") = " + format_number(value) + ", not constant-preserving");
  }
  return run_check("const_preserving_translation", phi, trials, seed, tolerance, sample_shift);
}

double replay_witness(const FunctionalHandle& L, const CheckReport& report) {
  if (report.witness.empty())
    throw Error(ErrorCode::InvalidArgument, "report '" + report.property + "' has no witness");
  if (report.property == "sigma_continuity") {
    const double residual = report.witness_scalars.at(0);
    return std::max(0.0, std::abs(L(report.witness[0]) - L.base_value()) - residual);
  }
  return amount_for(report.property)(L, Trial{report.witness, report.witness_scalars});
}

}  // namespace vf
