#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "varadhan/functionals.hpp"
#include "varadhan/space.hpp"

namespace vf {

/// Depths at which pit functions are dug when realizing the dual formula
///   I(x) = L(0) + sup_F { F(x) - L(F) }.
struct PitSchedule {
  std::vector<double> depths;
  double stall_tolerance = 1e-10;
  double divergence_slope = 0.5;

  /// 1, 2, 4, ..., 2^max_exponent
  static PitSchedule doubling(int max_exponent = 40);

  /// Throws InvalidArgument unless depths are positive, strictly increasing,
  /// at least two of them, and both tolerances positive.
  void validate() const;
};

struct PointConvergence {
  double depth = 0.0;      // last depth evaluated
  double increment = 0.0;  // change of the estimate at that depth
  bool divergent = false;
};

struct PointDual {
  double value = 0.0;  // +inf when divergent
  PointConvergence convergence;
  bool monotone = true;  // false if some deeper pit lowered the estimate
};

struct DualReport {
  RateFunction rate;
  double base_value = 0.0;
  std::vector<PointConvergence> convergence;
};

/// 0 at x, -depth everywhere else (ideal points included).
BoundedFunction pit_function(const SpacePtr& space, std::size_t x, double depth);

/// The dual rate at one point. Throws PointNotInSpace for a bad index/label.
PointDual dual_rate_at(const FunctionalHandle& functional, std::size_t x,
                       const PitSchedule& schedule = PitSchedule::doubling());
PointDual dual_rate_at(const FunctionalHandle& functional, const std::string& label,
                       const PitSchedule& schedule = PitSchedule::doubling());

/// Dual rate at every proper point; ideal points get +inf. Throws
/// InvariantViolation if some estimate comes out negative, which only a
/// non-monotone handle can produce.
DualReport dual_rate(const FunctionalHandle& functional,
                     const PitSchedule& schedule = PitSchedule::doubling());

/// L0 + max_x { F(x) - rate(x) } over finite rates. Throws AllInfiniteRate.
double reconstruct(const RateFunction& rate, double base_value, const BoundedFunction& f);

/// L(F) minus its reconstruction from the dual rate.
double representation_gap(const FunctionalHandle& functional, const DualReport& dual,
                          const BoundedFunction& f);
double representation_gap(const FunctionalHandle& functional, const BoundedFunction& f,
                          const PitSchedule& schedule = PitSchedule::doubling());

struct SublevelSet {
  std::vector<std::size_t> points;
  double diameter = 0.0;  // 0 for empty and singleton sets
};

/// {x : rate(x) <= a}. Throws InvalidArgument unless a > 0.
SublevelSet sublevel_set(const RateFunction& rate, double a);

/// Largest pairwise distance among the given points.
double diameter(const FiniteSpace& space, const std::vector<std::size_t>& points);

}  // namespace vf
