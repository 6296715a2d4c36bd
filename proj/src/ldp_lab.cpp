#include "varadhan/ldp_lab.hpp"

#include <algorithm>
#include <cmath>

#include "varadhan/duality.hpp"
#include "varadhan/error.hpp"
#include "varadhan/functionals.hpp"

namespace vf {

void MeasureSequence::validate() const {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (entries[k].n < 1)
      throw Error(ErrorCode::InvariantViolation, "entry " + std::to_string(k) + " has n < 1");
    if (k > 0 && entries[k].n <= entries[k - 1].n)
      throw Error(ErrorCode::InvariantViolation,
                  "n must be strictly increasing (entry " + std::to_string(k) + ")");
  }
}

double binomial_log_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return -kInfinity;
  const double dn = n, dk = k;
  double lp = std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
  if (k > 0) lp += dk * std::log(p);
  if (k < n) lp += (dn - dk) * std::log1p(-p);
  return lp;
}

double cramer_rate(double x, double p) {
  if (x < 0.0 || x > 1.0) return kInfinity;
  double r = 0.0;
  if (x > 0.0) r += x * std::log(x / p);
  if (x < 1.0) r += (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
  return r;
}

MeasureSequence cramer_sequence(double p, const std::vector<int>& schedule) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::InvalidP, "p must lie in (0, 1)");
  MeasureSequence seq;
  seq.description = "cramer p=" + format_number(p);
  for (int n : schedule) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "schedule entries must be >= 1");
    std::vector<double> grid(n + 1);
    std::vector<double> log_weights(n + 1);
    for (int k = 0; k <= n; ++k) {
      grid[k] = static_cast<double>(k) / n;
      log_weights[k] = binomial_log_pmf(n, k, p);
    }
    auto space = FiniteSpace::line(std::move(grid));
    seq.entries.push_back(
        MeasureEntry{n, ProbabilityMeasure::from_log_weights(std::move(space), std::move(log_weights))});
  }
  seq.validate();
  return seq;
}

// --- GridFunction ------------------------------------------------------------

GridFunction::GridFunction(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.empty() || grid_.size() != values_.size())
    throw Error(ErrorCode::InvalidArgument, "grid function needs matching nonempty grid and values");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i]))
      throw Error(ErrorCode::InvalidArgument, "grid function entries must be finite");
    if (i > 0 && grid_[i] <= grid_[i - 1])
      throw Error(ErrorCode::InvalidArgument, "grid must be strictly increasing");
  }
}

GridFunction GridFunction::sample(const std::function<double(double)>& fn, std::size_t points) {
  if (points < 2) throw Error(ErrorCode::InvalidArgument, "need at least two sample points");
  std::vector<double> grid(points), values(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    values[i] = fn(grid[i]);
  }
  return GridFunction(std::move(grid), std::move(values));
}

double GridFunction::operator()(double x) const {
  if (x <= grid_.front()) return values_.front();
  if (x >= grid_.back()) return values_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(grid_.begin(), grid_.end(), x) - grid_.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid_[lo]) / (grid_[hi] - grid_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

BoundedFunction restrict_to(const GridFunction& f, const SpacePtr& space) {
  std::vector<double> values(space->size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto x = space->position(i);
    if (!x || !std::isfinite(*x))
      throw Error(ErrorCode::InvalidArgument, "point '" + space->label(i) + "' has no grid position");
    values[i] = f(*x);
  }
  return BoundedFunction(space, std::move(values));
}

// --- limits ------------------------------------------------------------------

double ldp_value(const MeasureEntry& entry, const GridFunction& f) {
  return ldp_term(entry.measure, entry.n)(restrict_to(f, entry.space()));
}

LimitReport estimate_limit(const MeasureSequence& sequence, const GridFunction& f,
                           const LimitOptions& opts) {
  sequence.validate();
  const std::size_t count = sequence.entries.size();
  if (count < 3)
    throw Error(ErrorCode::ScheduleTooShort, "need at least three scales, got " + std::to_string(count));

  LimitReport report;
  for (const auto& entry : sequence.entries) report.terms.push_back({entry.n, ldp_value(entry, f)});

  const std::size_t fitted = std::max<std::size_t>(3, (count + 1) / 2);
  const std::size_t first = count - fitted;
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs, ys;
  for (std::size_t k = first; k < count; ++k) {
    const double n = report.terms[k].n;
    xs.push_back(std::log(n) / n);
    ys.push_back(report.terms[k].value);
    sx += xs.back();
    sy += ys.back();
  }
  const double mx = sx / fitted, my = sy / fitted;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < fitted; ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  // Degenerate design (e.g. n = 2 and 4 share log n / n): fall back to the mean.
  report.fit_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  report.extrapolated = my - report.fit_slope * mx;
  for (std::size_t k = 0; k < fitted; ++k)
    report.fit_residual = std::max(
        report.fit_residual, std::abs(report.extrapolated + report.fit_slope * xs[k] - ys[k]));

  const double last_diff = std::abs(report.terms[count - 1].value - report.terms[count - 2].value);
  report.converged = report.fit_residual <= opts.fit_residual_tolerance &&
                     last_diff <= opts.last_difference_tolerance &&
                     std::isfinite(report.extrapolated);
  return report;
}

RateFunction empirical_rate(const MeasureEntry& entry) {
  const auto lw = entry.measure.log_weights();
  std::vector<double> values(lw.size());
  for (std::size_t i = 0; i < lw.size(); ++i)
    values[i] = lw[i] == -kInfinity ? kInfinity : std::max(0.0, -lw[i] / entry.n);
  return RateFunction(entry.space(), std::move(values));
}

std::vector<TightnessRow> tightness_scan(const MeasureSequence& sequence, double a) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "sublevel threshold must be positive");
  std::vector<TightnessRow> rows;
  for (const auto& entry : sequence.entries) {
    const SublevelSet set = sublevel_set(empirical_rate(entry), a);
    rows.push_back({entry.n, set.points.size(), set.diameter});
  }
  return rows;
}

}  // namespace vf
