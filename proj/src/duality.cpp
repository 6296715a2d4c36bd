#include "varadhan/duality.hpp"

#include <algorithm>
#include <cmath>

#include "varadhan/error.hpp"

namespace vf {

PitSchedule PitSchedule::doubling(int max_exponent) {
  if (max_exponent < 1 || max_exponent > 1000)
    throw Error(ErrorCode::InvalidArgument, "pit depth cap must be a power of two between 2^1 and 2^1000");
  PitSchedule s;
  for (int k = 0; k <= max_exponent; ++k) s.depths.push_back(std::ldexp(1.0, k));
  return s;
}

void PitSchedule::validate() const {
  if (depths.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "pit schedule needs at least two depths");
  for (std::size_t k = 0; k < depths.size(); ++k) {
    if (!(depths[k] > 0.0) || !std::isfinite(depths[k]))
      throw Error(ErrorCode::InvalidArgument, "pit depths must be positive and finite");
    if (k > 0 && depths[k] <= depths[k - 1])
      throw Error(ErrorCode::InvalidArgument, "pit depths must be strictly increasing");
  }
  if (!(stall_tolerance > 0.0) || !(divergence_slope > 0.0))
    throw Error(ErrorCode::InvalidArgument, "pit schedule tolerances must be positive");
}

BoundedFunction pit_function(const SpacePtr& space, std::size_t x, double depth) {
  if (x >= space->size()) throw Error(ErrorCode::PointNotInSpace, "pit centre is not a point of the space");
  std::vector<double> values(space->size(), -depth);
  values[x] = 0.0;
  return BoundedFunction(space, std::move(values));
}

// Why pits suffice: by translation invariance any competitor F in the dual
// sup can be shifted so that F(x) = 0, and then F >= pit_{x,M} once M exceeds
// -min F, so monotonicity gives L(F) >= L(pit_{x,M}). The estimate
// L(0) - L(pit_{x,M}) is therefore nondecreasing in M and converges to I(x).
PointDual dual_rate_at(const FunctionalHandle& functional, std::size_t x,
                       const PitSchedule& schedule) {
  schedule.validate();
  const SpacePtr& space = functional.space();
  if (x >= space->size())
    throw Error(ErrorCode::PointNotInSpace, "point index " + std::to_string(x) + " is not in the space");

  const double base = functional.base_value();
  PointDual out;
  double best = -kInfinity;
  double prev = 0.0;
  for (std::size_t k = 0; k < schedule.depths.size(); ++k) {
    const double depth = schedule.depths[k];
    const double estimate = base - functional(pit_function(space, x, depth));
    out.convergence.depth = depth;
    if (k > 0) {
      const double increment = estimate - prev;
      out.convergence.increment = increment;
      if (increment < -schedule.stall_tolerance) out.monotone = false;
      if (increment < schedule.stall_tolerance) {
        out.value = std::max(best, estimate);
        return out;
      }
    }
    best = std::max(best, estimate);
    prev = estimate;
  }

  const std::size_t last = schedule.depths.size() - 1;
  const double step = schedule.depths[last] - schedule.depths[last - 1];
  if (out.convergence.increment >= schedule.divergence_slope * step) {
    out.convergence.divergent = true;
    out.value = kInfinity;
  } else {
    out.value = best;
  }
  return out;
}

PointDual dual_rate_at(const FunctionalHandle& functional, const std::string& label,
                       const PitSchedule& schedule) {
  const auto index = functional.space()->index_of(label);
  if (!index) throw Error(ErrorCode::PointNotInSpace, "no point labelled '" + label + "'");
  return dual_rate_at(functional, *index, schedule);
}

DualReport dual_rate(const FunctionalHandle& functional, const PitSchedule& schedule) {
  schedule.validate();
  const SpacePtr& space = functional.space();
  std::vector<double> values(space->size(), kInfinity);
  std::vector<PointConvergence> convergence(space->size(), PointConvergence{0.0, 0.0, true});

  // Estimates within this band below zero are rounding noise.
  const double noise = std::max(schedule.stall_tolerance, 1e-9);
  for (std::size_t x : space->proper_points()) {
    const PointDual d = dual_rate_at(functional, x, schedule);
    double v = d.value;
    if (v < 0.0) {
      if (v < -noise)
        throw Error(ErrorCode::InvariantViolation,
                    "dual rate at point " + std::to_string(x) + " is " + format_number(v) +
                        "; the functional is not monotone");
      v = 0.0;
    }
    values[x] = v;
    convergence[x] = d.convergence;
  }
  return DualReport{RateFunction(space, std::move(values)), functional.base_value(),
                    std::move(convergence)};
}

double reconstruct(const RateFunction& rate, double base_value, const BoundedFunction& f) {
  require_same_space(rate.space(), f.space());
  if (rate.all_infinite())
    throw Error(ErrorCode::AllInfiniteRate, "rate is infinite everywhere; the sup is -inf");
  double best = -kInfinity;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (rate[i] == kInfinity) continue;
    best = std::max(best, f[i] - rate[i]);
  }
  return base_value + best;
}

double representation_gap(const FunctionalHandle& functional, const DualReport& dual,
                          const BoundedFunction& f) {
  return functional(f) - reconstruct(dual.rate, dual.base_value, f);
}

double representation_gap(const FunctionalHandle& functional, const BoundedFunction& f,
                          const PitSchedule& schedule) {
  return representation_gap(functional, dual_rate(functional, schedule), f);
}

double diameter(const FiniteSpace& space, const std::vector<std::size_t>& points) {
  if (points.size() < 2) return 0.0;
  if (space.metric_kind() == FiniteSpace::MetricKind::Line) {
    double lo = kInfinity, hi = -kInfinity;
    for (std::size_t i : points) {
      const double c = *space.coordinate(i);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    return hi - lo;
  }
  if (space.metric_kind() == FiniteSpace::MetricKind::Discrete) return 1.0;
  double d = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      d = std::max(d, space.distance(points[a], points[b]));
  return d;
}

SublevelSet sublevel_set(const RateFunction& rate, double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "sublevel threshold must be positive");
  SublevelSet out;
  for (std::size_t i = 0; i < rate.size(); ++i)
    if (rate[i] <= a) out.points.push_back(i);
  out.diameter = diameter(*rate.space(), out.points);
  return out;
}

}  // namespace vf
