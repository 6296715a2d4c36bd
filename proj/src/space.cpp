#include "varadhan/space.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "varadhan/error.hpp"
#include "varadhan/log_sum_exp.hpp"

namespace vf {

namespace {

void check_labels(const std::vector<std::string>& labels) {
  if (labels.empty())
    throw Error(ErrorCode::InvariantViolation, "space must have at least one point");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second)
      throw Error(ErrorCode::InvariantViolation, "duplicate point label '" + l + "'");
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

// --- FiniteSpace -----------------------------------------------------------

SpacePtr FiniteSpace::from_matrix(std::vector<std::string> labels,
                                  const std::vector<std::vector<double>>& metric) {
  check_labels(labels);
  const std::size_t m = labels.size();
  if (metric.size() != m)
    throw Error(ErrorCode::InvariantViolation, "metric row count does not match point count");

  std::vector<double> d(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    if (metric[i].size() != m)
      throw Error(ErrorCode::InvariantViolation,
                  "metric row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < m; ++j) {
      const double v = metric[i][j];
      if (!std::isfinite(v) || v < 0.0)
        throw Error(ErrorCode::InvariantViolation, "metric entries must be finite and nonnegative");
      d[i * m + j] = v;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (d[i * m + i] != 0.0)
      throw Error(ErrorCode::InvariantViolation, "metric diagonal must be zero");
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(d[i * m + j] - d[j * m + i]) > kStructuralTolerance)
        throw Error(ErrorCode::InvariantViolation, "metric is not symmetric");
      if (d[i * m + j] == 0.0)
        throw Error(ErrorCode::InvariantViolation, "distinct points at distance zero");
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (d[i * m + j] > d[i * m + k] + d[k * m + j] + kStructuralTolerance)
          throw Error(ErrorCode::InvariantViolation, "metric violates the triangle inequality");

  auto space = std::shared_ptr<FiniteSpace>(new FiniteSpace());
  space->labels_ = std::move(labels);
  space->ideal_.assign(m, false);
  space->kind_ = MetricKind::Matrix;
  space->matrix_ = std::move(d);
  return space;
}

SpacePtr FiniteSpace::discrete(std::vector<std::string> labels) {
  check_labels(labels);
  auto space = std::shared_ptr<FiniteSpace>(new FiniteSpace());
  space->ideal_.assign(labels.size(), false);
  space->labels_ = std::move(labels);
  space->kind_ = MetricKind::Discrete;
  return space;
}

SpacePtr FiniteSpace::discrete(std::size_t point_count) {
  std::vector<std::string> labels;
  labels.reserve(point_count);
  for (std::size_t i = 1; i <= point_count; ++i) labels.push_back("x" + std::to_string(i));
  return discrete(std::move(labels));
}

SpacePtr FiniteSpace::line(std::vector<double> coordinates, std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.reserve(coordinates.size());
    for (double x : coordinates) labels.push_back(format_number(x));
  }
  if (labels.size() != coordinates.size())
    throw Error(ErrorCode::InvariantViolation, "label count does not match coordinate count");
  check_labels(labels);

  std::vector<double> sorted = coordinates;
  for (double x : sorted)
    if (!std::isfinite(x))
      throw Error(ErrorCode::InvariantViolation, "coordinates must be finite");
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorCode::InvariantViolation, "distinct points at distance zero");

  auto space = std::shared_ptr<FiniteSpace>(new FiniteSpace());
  space->ideal_.assign(labels.size(), false);
  space->labels_ = std::move(labels);
  space->kind_ = MetricKind::Line;
  space->positions_ = coordinates;
  space->coordinates_ = std::move(coordinates);
  return space;
}

SpacePtr FiniteSpace::half_line(std::vector<double> grid) {
  if (grid.empty())
    throw Error(ErrorCode::InvariantViolation, "half-line grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0)
      throw Error(ErrorCode::InvariantViolation, "half-line grid points must be finite and >= 0");
    if (i > 0 && grid[i] <= grid[i - 1])
      throw Error(ErrorCode::InvariantViolation, "half-line grid must be strictly increasing");
  }
  std::vector<std::string> labels;
  std::vector<double> chart;
  for (double x : grid) {
    labels.push_back(format_number(x));
    chart.push_back(x / (1.0 + x));
  }
  labels.push_back("inf");
  chart.push_back(1.0);

  auto space = std::shared_ptr<FiniteSpace>(new FiniteSpace());
  space->labels_ = std::move(labels);
  space->ideal_.assign(space->labels_.size(), false);
  space->ideal_.back() = true;
  space->kind_ = MetricKind::Line;
  space->coordinates_ = std::move(chart);
  grid.push_back(kInfinity);
  space->positions_ = std::move(grid);
  return space;
}

std::optional<std::size_t> FiniteSpace::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

double FiniteSpace::distance(std::size_t i, std::size_t j) const {
  if (i >= size() || j >= size())
    throw Error(ErrorCode::PointNotInSpace, "distance: index out of range");
  switch (kind_) {
    case MetricKind::Matrix: return matrix_[i * size() + j];
    case MetricKind::Line: return std::abs(coordinates_[i] - coordinates_[j]);
    case MetricKind::Discrete: return i == j ? 0.0 : 1.0;
  }
  return 0.0;
}

std::optional<double> FiniteSpace::coordinate(std::size_t i) const {
  if (kind_ != MetricKind::Line) return std::nullopt;
  return coordinates_.at(i);
}

std::optional<double> FiniteSpace::position(std::size_t i) const {
  if (positions_.empty()) return std::nullopt;
  return positions_.at(i);
}

std::size_t FiniteSpace::ideal_count() const noexcept {
  return static_cast<std::size_t>(std::count(ideal_.begin(), ideal_.end(), true));
}

std::vector<std::size_t> FiniteSpace::proper_points() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i)
    if (!ideal_[i]) out.push_back(i);
  return out;
}

bool FiniteSpace::operator==(const FiniteSpace& other) const {
  if (labels_ != other.labels_ || ideal_ != other.ideal_) return false;
  if (kind_ == other.kind_) {
    switch (kind_) {
      case MetricKind::Discrete: return true;
      case MetricKind::Line: return coordinates_ == other.coordinates_;
      case MetricKind::Matrix: return matrix_ == other.matrix_;
    }
  }
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (distance(i, j) != other.distance(i, j)) return false;
  return true;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!same_space(a, b))
    throw Error(ErrorCode::SpaceMismatch, "operands live on different spaces");
}

// --- BoundedFunction -------------------------------------------------------

BoundedFunction::BoundedFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "function needs a space");
  if (values_.size() != space_->size())
    throw Error(ErrorCode::SpaceMismatch,
                "function has " + std::to_string(values_.size()) + " values for " +
                    std::to_string(space_->size()) + " points");
  for (double v : values_)
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvariantViolation, "function values must be finite");
}

BoundedFunction BoundedFunction::constant(SpacePtr space, double c) {
  const std::size_t m = space ? space->size() : 0;
  return BoundedFunction(std::move(space), std::vector<double>(m, c));
}

double BoundedFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double BoundedFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

BoundedFunction BoundedFunction::operator+(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v += c;
  return BoundedFunction(space_, std::move(out));
}

BoundedFunction BoundedFunction::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return BoundedFunction(space_, std::move(out));
}

bool BoundedFunction::operator==(const BoundedFunction& other) const {
  return same_space(space_, other.space_) && values_ == other.values_;
}

BoundedFunction pointwise_max(const BoundedFunction& f, const BoundedFunction& g) {
  require_same_space(f.space(), g.space());
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(f[i], g[i]);
  return BoundedFunction(f.space(), std::move(out));
}

BoundedFunction pointwise_min(const BoundedFunction& f, const BoundedFunction& g) {
  require_same_space(f.space(), g.space());
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::min(f[i], g[i]);
  return BoundedFunction(f.space(), std::move(out));
}

double sup_distance(const BoundedFunction& f, const BoundedFunction& g) {
  require_same_space(f.space(), g.space());
  double d = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, std::abs(f[i] - g[i]));
  return d;
}

double inf_difference(const BoundedFunction& f, const BoundedFunction& g) {
  require_same_space(f.space(), g.space());
  double d = kInfinity;
  for (std::size_t i = 0; i < f.size(); ++i) d = std::min(d, f[i] - g[i]);
  return d;
}

// --- ProbabilityMeasure ----------------------------------------------------

ProbabilityMeasure::ProbabilityMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "measure needs a space");
  if (weights_.size() != space_->size())
    throw Error(ErrorCode::SpaceMismatch, "measure length does not match the space");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw Error(ErrorCode::InvariantViolation, "measure weights must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kStructuralTolerance)
    throw Error(ErrorCode::InvariantViolation,
                "measure weights sum to " + format_number(sum) + ", not 1");
  log_weights_.resize(weights_.size());
  std::transform(weights_.begin(), weights_.end(), log_weights_.begin(),
                 [](double w) { return std::log(w); });
}

ProbabilityMeasure ProbabilityMeasure::from_log_weights(SpacePtr space,
                                                        std::vector<double> log_weights) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "measure needs a space");
  if (log_weights.size() != space->size())
    throw Error(ErrorCode::SpaceMismatch, "measure length does not match the space");
  for (double lw : log_weights)
    if (std::isnan(lw) || lw == kInfinity)
      throw Error(ErrorCode::InvariantViolation, "log-weights must be < +inf");
  const double total = log_sum_exp(log_weights);
  if (!std::isfinite(total)) throw Error(ErrorCode::AllZero, "all log-weights are -inf");

  ProbabilityMeasure mu;
  mu.space_ = std::move(space);
  mu.log_weights_ = std::move(log_weights);
  mu.weights_.resize(mu.log_weights_.size());
  for (std::size_t i = 0; i < mu.log_weights_.size(); ++i) {
    mu.log_weights_[i] -= total;
    mu.weights_[i] = std::exp(mu.log_weights_[i]);
  }
  mu.normalization_ = std::exp(total);
  return mu;
}

ProbabilityMeasure make_measure(SpacePtr space, std::vector<double> weights) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "measure needs a space");
  if (weights.size() != space->size())
    throw Error(ErrorCode::SpaceMismatch, "measure length does not match the space");
  double sum = 0.0;
  for (double w : weights) {
    if (std::isnan(w) || w < 0.0)
      throw Error(ErrorCode::NegativeWeight, "weight " + format_number(w) + " is negative");
    if (!std::isfinite(w)) throw Error(ErrorCode::InvariantViolation, "weights must be finite");
    sum += w;
  }
  if (sum == 0.0) throw Error(ErrorCode::AllZero, "weights are all zero");

  ProbabilityMeasure mu;
  mu.space_ = std::move(space);
  mu.normalization_ = sum;
  mu.weights_ = std::move(weights);
  mu.log_weights_.resize(mu.weights_.size());
  const double log_sum = std::log(sum);
  for (std::size_t i = 0; i < mu.weights_.size(); ++i) {
    mu.log_weights_[i] = std::log(mu.weights_[i]) - log_sum;
    mu.weights_[i] /= sum;
  }
  return mu;
}

ProbabilityMeasure make_measure(std::vector<double> weights) {
  auto space = FiniteSpace::discrete(weights.size());
  return make_measure(std::move(space), std::move(weights));
}

double expectation(const ProbabilityMeasure& mu, const BoundedFunction& f) {
  require_same_space(mu.space(), f.space());
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += mu[i] * f[i];
  return s;
}

// --- RateFunction ----------------------------------------------------------

RateFunction::RateFunction(SpacePtr space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw Error(ErrorCode::InvalidArgument, "rate function needs a space");
  if (values_.size() != space_->size())
    throw Error(ErrorCode::SpaceMismatch, "rate length does not match the space");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::isnan(values_[i]) || values_[i] < 0.0)
      throw Error(ErrorCode::InvariantViolation,
                  "rate at point " + std::to_string(i) + " is " + format_number(values_[i]));
    if (space_->is_ideal(i) && values_[i] != kInfinity)
      throw Error(ErrorCode::InvariantViolation, "rate must be infinite at ideal points");
  }
}

bool RateFunction::all_infinite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == kInfinity; });
}

double RateFunction::min_finite() const {
  double m = kInfinity;
  for (double v : values_) m = std::min(m, v);
  return m;
}

// --- DecreasingSequence ----------------------------------------------------

DecreasingSequence validate_decreasing(std::vector<BoundedFunction> terms) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "sequence must be nonempty");
  const SpacePtr& space = terms.front().space();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    require_same_space(space, terms[k].space());
    for (std::size_t i = 0; i < terms[k].size(); ++i) {
      if (terms[k][i] < 0.0)
        throw Error(ErrorCode::NegativeTerm, "term " + std::to_string(k) + " is negative at point " +
                                                 std::to_string(i));
      if (k > 0 && terms[k][i] > terms[k - 1][i])
        throw NotMonotoneError(k, i,
                               "term " + std::to_string(k) + " exceeds term " +
                                   std::to_string(k - 1) + " at point " + std::to_string(i));
    }
  }
  double residual = 0.0;
  const auto& last = terms.back();
  for (std::size_t i : space->proper_points()) residual = std::max(residual, last[i]);
  return DecreasingSequence{std::move(terms), residual};
}

}  // namespace vf
