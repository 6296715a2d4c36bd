#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "varadhan/space.hpp"

namespace vf {

/// Declared properties of a functional. These are declarations only; the
/// axioms harness is what certifies them.
struct Claims {
  bool maximal = false;
  bool convex = false;
  bool sigma_continuous = false;
};

/// Implementation interface behind a FunctionalHandle.
class Functional {
 public:
  virtual ~Functional() = default;

  virtual double evaluate(const BoundedFunction& f) const = 0;

  /// Exact gradient at F, if the functional knows it.
  virtual std::optional<std::vector<double>> gradient(const BoundedFunction&) const {
    return std::nullopt;
  }

  /// Closed-form measure-level conjugate L(0) + sup_F { <mu,F> - L(F) }.
  virtual std::optional<double> conjugate(const ProbabilityMeasure&) const {
    return std::nullopt;
  }
};

/// A functional L on bounded functions over one finite space, plus its
/// cached value at zero. Immutable; safe to evaluate from several threads.
class FunctionalHandle {
 public:
  FunctionalHandle(std::string name, SpacePtr space,
                   std::shared_ptr<const Functional> impl, Claims claims);

  /// Wraps an arbitrary callable, e.g. for testing user-defined functionals.
  static FunctionalHandle from_function(std::string name, SpacePtr space,
                                        std::function<double(const BoundedFunction&)> fn,
                                        Claims claims = {});

  /// Throws SpaceMismatch if F lives elsewhere.
  double evaluate(const BoundedFunction& f) const;
  double operator()(const BoundedFunction& f) const { return evaluate(f); }

  std::optional<std::vector<double>> gradient(const BoundedFunction& f) const;
  std::optional<double> closed_form_conjugate(const ProbabilityMeasure& mu) const;

  const std::string& name() const noexcept { return name_; }
  const SpacePtr& space() const noexcept { return space_; }
  const Claims& claims() const noexcept { return claims_; }
  bool claims_maximal() const noexcept { return claims_.maximal; }
  bool claims_convex() const noexcept { return claims_.convex; }
  bool claims_sigma_continuous() const noexcept { return claims_.sigma_continuous; }

  /// L(0)
  double base_value() const noexcept { return base_value_; }

 private:
  std::string name_;
  SpacePtr space_;
  std::shared_ptr<const Functional> impl_;
  Claims claims_;
  double base_value_ = 0.0;
};

/// log of the integral of e^F against nu, scaled to total mass `mass`:
///   L(F) = log(mass) + log sum_x e^{F(x)} nu(x).
/// Convex and sigma-continuous, not maximal.
FunctionalHandle log_integral(const ProbabilityMeasure& nu, double mass = 1.0);

/// L(F) = L0 + max_x { F(x) - I(x) }, infinite rates excluded.
/// Throws AllInfiniteRate when I is infinite everywhere.
FunctionalHandle sup_form(const RateFunction& rate, double base_value);

/// (1/n) log sum_x e^{n F(x)} mu(x)
FunctionalHandle ldp_term(const ProbabilityMeasure& mu, int n);

/// L(F) = <mu, F>
FunctionalHandle linear(const ProbabilityMeasure& mu);

/// limsup at infinity for functions on a half-line grid that are constant
/// past the last grid point. The space must come from FiniteSpace::half_line.
FunctionalHandle tail_limsup(SpacePtr half_line_space);

/// Function on a half-line space: grid values, then the constant value it
/// keeps beyond the grid.
BoundedFunction make_tail_function(SpacePtr half_line_space, std::vector<double> grid_values,
                                   double tail_value);
double tail_value(const BoundedFunction& f);

/// F_n(x) = min(1, x / n) on the grid, tail value 1. Decreases to 0 at every
/// grid point while its limsup at infinity stays 1.
BoundedFunction tail_witness(SpacePtr half_line_space, double n);

}  // namespace vf
