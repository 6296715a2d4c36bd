#pragma once

#include <functional>
#include <string>
#include <vector>

#include "varadhan/space.hpp"

namespace vf {

struct MeasureEntry {
  int n = 1;
  ProbabilityMeasure measure;

  const SpacePtr& space() const noexcept { return measure.space(); }
};

/// mu_1, mu_2, ... at increasing scales n.
struct MeasureSequence {
  std::string description;
  std::vector<MeasureEntry> entries;

  /// Throws InvariantViolation unless n is positive and strictly increasing.
  void validate() const;
};

/// log C(n, k) p^k (1 - p)^(n - k), via lgamma.
double binomial_log_pmf(int n, int k, double p);

/// x log(x/p) + (1-x) log((1-x)/(1-p)) with 0 log 0 = 0; +inf off [0, 1].
double cramer_rate(double x, double p);

/// Law of S_n / n for S_n ~ Binomial(n, p) on the grid {k/n}, Euclidean
/// metric. Throws InvalidP unless 0 < p < 1.
MeasureSequence cramer_sequence(double p, const std::vector<int>& schedule);

/// Piecewise-linear interpolant of samples on an increasing grid; constant
/// extrapolation outside it.
class GridFunction {
 public:
  GridFunction(std::vector<double> grid, std::vector<double> values);

  /// Samples fn on `points` equally spaced nodes of [0, 1].
  static GridFunction sample(const std::function<double(double)>& fn, std::size_t points = 1025);

  double operator()(double x) const;

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
};

/// F restricted to the grid positions of a space.
BoundedFunction restrict_to(const GridFunction& f, const SpacePtr& space);

struct LimitOptions {
  double fit_residual_tolerance = 1e-3;
  double last_difference_tolerance = 1e-2;
};

struct LimitTerm {
  int n = 0;
  double value = 0.0;
};

struct LimitReport {
  std::vector<LimitTerm> terms;
  double extrapolated = 0.0;
  bool converged = false;
  double fit_slope = 0.0;     // coefficient of (log n)/n
  double fit_residual = 0.0;  // max |fit - value| over the fitted terms
};

/// (1/n) log sum_x e^{n F(x)} mu_n(x) for one entry.
double ldp_value(const MeasureEntry& entry, const GridFunction& f);

/// Terms of the scaled log-integral along the sequence, then a least-squares
/// fit value(n) = a + b (log n)/n on the last half of the schedule (at least
/// three terms); a is the extrapolated limit. Throws ScheduleTooShort below
/// three entries.
LimitReport estimate_limit(const MeasureSequence& sequence, const GridFunction& f,
                           const LimitOptions& opts = {});

/// I_n(x) = -(1/n) log mu_n({x}).
RateFunction empirical_rate(const MeasureEntry& entry);

struct TightnessRow {
  int n = 0;
  std::size_t points = 0;
  double diameter = 0.0;
};

/// Diameter of {x : I_n(x) <= a} for each entry.
std::vector<TightnessRow> tightness_scan(const MeasureSequence& sequence, double a);

}  // namespace vf
