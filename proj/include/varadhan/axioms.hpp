#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "varadhan/functionals.hpp"
#include "varadhan/space.hpp"

namespace vf {

inline constexpr double kIdentityTolerance = 1e-9;

/// Outcome of one randomized (or explicit) property check.
///
/// `worst_violation` is the largest amount by which the property failed,
/// clamped at 0, so violations == 0 exactly when worst_violation <= tolerance.
/// The witness holds the inputs of the worst failing trial: functions in
/// `witness`, scalar parameters (shift, theta) in `witness_scalars`.
struct CheckReport {
  std::string property;
  int trials = 0;
  int violations = 0;
  double worst_violation = 0.0;
  double tolerance = kIdentityTolerance;
  std::vector<BoundedFunction> witness;
  std::vector<double> witness_scalars;
  std::uint64_t seed = 0;

  bool passed() const noexcept { return violations == 0; }
};

/// L(F) <= L(G) for F <= G. G = F + perturbation, perturbation in [0, 5].
CheckReport check_monotone(const FunctionalHandle& functional, int trials, std::uint64_t seed,
                           double tolerance = kIdentityTolerance);

/// The lattice form of monotonicity: L(F v G) >= max(L(F), L(G)).
CheckReport check_monotone_lattice(const FunctionalHandle& functional, int trials,
                                   std::uint64_t seed, double tolerance = kIdentityTolerance);

/// |L(F + c) - L(F) - c| with c in [-10, 10].
CheckReport check_translation(const FunctionalHandle& functional, int trials, std::uint64_t seed,
                              double tolerance = kIdentityTolerance);

/// |L(F v G) - max(L(F), L(G))| on random pairs.
CheckReport check_maximal(const FunctionalHandle& functional, int trials, std::uint64_t seed,
                          double tolerance = kIdentityTolerance);

/// Same, on the given pairs only.
CheckReport check_maximal(const FunctionalHandle& functional,
                          std::span<const std::pair<BoundedFunction, BoundedFunction>> pairs,
                          double tolerance = kIdentityTolerance);

/// inf(F - G) <= L(F) - L(G) and |L(F) - L(G)| <= ||F - G||.
CheckReport check_lipschitz(const FunctionalHandle& functional, int trials, std::uint64_t seed,
                            double tolerance = kIdentityTolerance);

/// Only the lower bound inf(F - G) <= L(F) - L(G).
CheckReport check_inf_gap(const FunctionalHandle& functional, int trials, std::uint64_t seed,
                          double tolerance = kIdentityTolerance);

struct SigmaReport {
  CheckReport check;
  std::vector<double> trajectory;  // L(F_n)
  double base_value = 0.0;         // L(0)
};

/// |L(F_last) - L(0)| <= tolerance + residual (Lipschitz constant 1).
/// Throws SequenceNotVanishing if the residual is above 1e-6.
SigmaReport check_sigma_continuity(const FunctionalHandle& functional,
                                   const DecreasingSequence& sequence,
                                   double tolerance = kIdentityTolerance);

/// For a convex functional with Phi(c) = c: translation holds, and so does
///   Phi(F + c) <= Phi(F) + c + theta (Phi(2F)/2 - Phi(F))
/// for theta in {1/2, 1/4, 1/8}.
/// Throws PreconditionFailed if Phi does not claim convexity or moves a
/// sampled constant.
CheckReport check_const_preserving_implies_translation(const FunctionalHandle& phi, int trials,
                                                       std::uint64_t seed,
                                                       double tolerance = kIdentityTolerance);

/// Recomputes the violation amount of a report's witness. Throws
/// InvalidArgument if the report carries no witness.
double replay_witness(const FunctionalHandle& functional, const CheckReport& report);

}  // namespace vf
