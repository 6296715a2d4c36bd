#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Structural tolerance for simplex sums and metric axioms.
inline constexpr double kStructuralTolerance = 1e-12;

class FiniteSpace;
using SpacePtr = std::shared_ptr<const FiniteSpace>;

/// A finite metric space. Points are addressed by index; labels are opaque.
///
/// A space may carry "ideal" points: points of a compactification that are
/// not themselves points of the underlying space (the half-line grid keeps
/// one such point standing for +infinity). Functions take values there, but
/// rate functions are infinite there and pointwise limits ignore them.
class FiniteSpace {
 public:
  enum class MetricKind { Matrix, Line, Discrete };

  /// Explicit distance matrix. Checks symmetry, zero diagonal, positive
  /// off-diagonal entries and the triangle inequality.
  static SpacePtr from_matrix(std::vector<std::string> labels,
                              const std::vector<std::vector<double>>& metric);

  /// 0/1 metric.
  static SpacePtr discrete(std::vector<std::string> labels);
  /// 0/1 metric on points labelled x1..xm.
  static SpacePtr discrete(std::size_t point_count);

  /// Points on the real line with |x - y| as distance. Labels default to the
  /// shortest round-trip decimal form of each coordinate.
  static SpacePtr line(std::vector<double> coordinates,
                       std::vector<std::string> labels = {});

  /// A nonnegative grid on [0, inf) followed by one ideal point "inf".
  /// Distances are taken in the compactified chart x -> x / (1 + x).
  static SpacePtr half_line(std::vector<double> grid);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;

  double distance(std::size_t i, std::size_t j) const;
  MetricKind metric_kind() const noexcept { return kind_; }

  /// Coordinates in the chart used for the metric (Line spaces only).
  std::optional<double> coordinate(std::size_t i) const;
  /// The un-charted grid position, where one exists (Line and half-line).
  std::optional<double> position(std::size_t i) const;

  bool is_ideal(std::size_t i) const { return ideal_.at(i); }
  std::size_t ideal_count() const noexcept;
  /// Indices of points that belong to the space proper.
  std::vector<std::size_t> proper_points() const;

  /// Structural equality: labels, ideal flags and all pairwise distances.
  bool operator==(const FiniteSpace& other) const;

 private:
  FiniteSpace() = default;

  std::vector<std::string> labels_;
  std::vector<bool> ideal_;
  MetricKind kind_ = MetricKind::Discrete;
  std::vector<double> matrix_;        // row-major, Matrix kind
  std::vector<double> coordinates_;   // chart coordinates, Line kind
  std::vector<double> positions_;     // raw grid positions, when known
};

/// Same pointer, or structurally equal spaces.
bool same_space(const SpacePtr& a, const SpacePtr& b);
void require_same_space(const SpacePtr& a, const SpacePtr& b);

/// A real function on a finite space; every value finite.
class BoundedFunction {
 public:
  BoundedFunction(SpacePtr space, std::vector<double> values);

  static BoundedFunction constant(SpacePtr space, double c);
  static BoundedFunction zero(SpacePtr space) { return constant(std::move(space), 0.0); }

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  double max() const;
  double min() const;

  BoundedFunction operator+(double c) const;
  BoundedFunction operator-(double c) const { return *this + (-c); }
  BoundedFunction scaled(double factor) const;

  bool operator==(const BoundedFunction& other) const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

BoundedFunction pointwise_max(const BoundedFunction& f, const BoundedFunction& g);
BoundedFunction pointwise_min(const BoundedFunction& f, const BoundedFunction& g);
/// max_x |F(x) - G(x)|
double sup_distance(const BoundedFunction& f, const BoundedFunction& g);
/// min_x (F(x) - G(x))
double inf_difference(const BoundedFunction& f, const BoundedFunction& g);

/// A point of the probability simplex over a finite space.
///
/// Log-weights are kept alongside the weights so that measures with masses
/// far below the double range (binomial tails at large n) stay exact.
class ProbabilityMeasure {
 public:
  /// Validates weights >= 0 and |sum - 1| <= 1e-12.
  ProbabilityMeasure(SpacePtr space, std::vector<double> weights);

  /// Normalizes exp(log_weights) by a log-sum-exp; entries may be -inf.
  static ProbabilityMeasure from_log_weights(SpacePtr space,
                                             std::vector<double> log_weights);

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::size_t size() const noexcept { return weights_.size(); }

  /// Total mass of the raw input before normalization (1 if built normalized).
  double normalization() const noexcept { return normalization_; }

 private:
  ProbabilityMeasure() = default;
  friend ProbabilityMeasure make_measure(SpacePtr, std::vector<double>);

  SpacePtr space_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  double normalization_ = 1.0;
};

/// Divides nonnegative weights by their sum.
/// Throws NegativeWeight or AllZero.
ProbabilityMeasure make_measure(SpacePtr space, std::vector<double> weights);
/// Same, on a discrete space sized to the weights.
ProbabilityMeasure make_measure(std::vector<double> weights);

/// <mu, F>
double expectation(const ProbabilityMeasure& mu, const BoundedFunction& f);

/// Extended-real function with values in [0, inf]. Ideal points are always
/// infinite.
class RateFunction {
 public:
  RateFunction(SpacePtr space, std::vector<double> values);

  const SpacePtr& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  bool all_infinite() const;
  /// Minimum over finite entries; +inf when there are none.
  double min_finite() const;

 private:
  SpacePtr space_;
  std::vector<double> values_;
};

/// F_1 >= F_2 >= ... >= 0, with the sup-norm of the last term over proper
/// points recorded as the distance still left to zero.
struct DecreasingSequence {
  std::vector<BoundedFunction> terms;
  double residual = 0.0;
};

/// Throws NotMonotoneError at the first (term, point) with
/// terms[k+1] > terms[k], NegativeTerm if any value is below zero.
DecreasingSequence validate_decreasing(std::vector<BoundedFunction> terms);

/// Shortest round-trip decimal text for a double.
std::string format_number(double x);

}  // namespace vf
