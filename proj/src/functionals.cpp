#include "varadhan/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "varadhan/convex_duality.hpp"
#include "varadhan/error.hpp"
#include "varadhan/log_sum_exp.hpp"

namespace vf {

namespace {

class CallableFunctional final : public Functional {
 public:
  explicit CallableFunctional(std::function<double(const BoundedFunction&)> fn)
      : fn_(std::move(fn)) {}
  double evaluate(const BoundedFunction& f) const override { return fn_(f); }

 private:
  std::function<double(const BoundedFunction&)> fn_;
};

// Shared by log_integral and ldp_term: (1/n) log sum e^{n F} mu + log(mass).
class ScaledLogIntegral final : public Functional {
 public:
  ScaledLogIntegral(ProbabilityMeasure mu, double scale, double log_mass)
      : mu_(std::move(mu)), scale_(scale), log_mass_(log_mass) {}

  double evaluate(const BoundedFunction& f) const override {
    return log_mass_ + log_sum_exp_weighted(f.values(), mu_.log_weights(), scale_) / scale_;
  }

  std::optional<std::vector<double>> gradient(const BoundedFunction& f) const override {
    const auto tilt = exponential_tilt(mu_, f.scaled(scale_));
    return std::vector<double>(tilt.weights().begin(), tilt.weights().end());
  }

  // sup_F <m, F> - (1/n) Lambda(nF) = KL(m || mu) / n; the log(mass) shift
  // cancels against L(0).
  std::optional<double> conjugate(const ProbabilityMeasure& m) const override {
    return kl_divergence(m, mu_) / scale_;
  }

 private:
  ProbabilityMeasure mu_;
  double scale_;
  double log_mass_;
};

class SupForm final : public Functional {
 public:
  SupForm(RateFunction rate, double base) : rate_(std::move(rate)), base_(base) {}

  double evaluate(const BoundedFunction& f) const override {
    double best = -kInfinity;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (rate_[i] == kInfinity) continue;
      best = std::max(best, f[i] - rate_[i]);
    }
    return base_ + best;
  }

  // sup_F <mu, F> - max(F - I) is attained at F = I on the support of mu.
  std::optional<double> conjugate(const ProbabilityMeasure& mu) const override {
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] == 0.0) continue;
      if (rate_[i] == kInfinity) return kInfinity;
      s += mu[i] * rate_[i];
    }
    return s;
  }

 private:
  RateFunction rate_;
  double base_;
};

class Linear final : public Functional {
 public:
  explicit Linear(ProbabilityMeasure mu) : mu_(std::move(mu)) {}
  double evaluate(const BoundedFunction& f) const override { return expectation(mu_, f); }
  std::optional<std::vector<double>> gradient(const BoundedFunction&) const override {
    return std::vector<double>(mu_.weights().begin(), mu_.weights().end());
  }

 private:
  ProbabilityMeasure mu_;
};

class TailLimsup final : public Functional {
 public:
  double evaluate(const BoundedFunction& f) const override { return f.values().back(); }
};

void require_half_line(const SpacePtr& space) {
  if (!space || space->ideal_count() != 1 || !space->is_ideal(space->size() - 1))
    throw Error(ErrorCode::InvalidArgument,
                "tail functions need a half-line space with a single point at infinity");
}

}  // namespace

FunctionalHandle::FunctionalHandle(std::string name, SpacePtr space,
                                   std::shared_ptr<const Functional> impl, Claims claims)
    : name_(std::move(name)), space_(std::move(space)), impl_(std::move(impl)), claims_(claims) {
  if (!space_ || !impl_) throw Error(ErrorCode::InvalidArgument, "handle needs a space and an evaluator");
  base_value_ = impl_->evaluate(BoundedFunction::zero(space_));
}

FunctionalHandle FunctionalHandle::from_function(std::string name, SpacePtr space,
                                                 std::function<double(const BoundedFunction&)> fn,
                                                 Claims claims) {
  return FunctionalHandle(std::move(name), std::move(space),
                          std::make_shared<CallableFunctional>(std::move(fn)), claims);
}

double FunctionalHandle::evaluate(const BoundedFunction& f) const {
  require_same_space(space_, f.space());
  return impl_->evaluate(f);
}

std::optional<std::vector<double>> FunctionalHandle::gradient(const BoundedFunction& f) const {
  require_same_space(space_, f.space());
  return impl_->gradient(f);
}

std::optional<double> FunctionalHandle::closed_form_conjugate(const ProbabilityMeasure& mu) const {
  require_same_space(space_, mu.space());
  return impl_->conjugate(mu);
}

FunctionalHandle log_integral(const ProbabilityMeasure& nu, double mass) {
  if (!(mass > 0.0) || !std::isfinite(mass))
    throw Error(ErrorCode::InvalidArgument, "log_integral: mass must be positive and finite");
  return FunctionalHandle("log_integral", nu.space(),
                          std::make_shared<ScaledLogIntegral>(nu, 1.0, std::log(mass)),
                          Claims{.maximal = false, .convex = true, .sigma_continuous = true});
}

FunctionalHandle sup_form(const RateFunction& rate, double base_value) {
  if (rate.all_infinite())
    throw Error(ErrorCode::AllInfiniteRate,
                "sup_form: rate is infinite everywhere, the functional would be -inf");
  if (!std::isfinite(base_value))
    throw Error(ErrorCode::InvalidArgument, "sup_form: L0 must be finite");
  return FunctionalHandle("sup_form", rate.space(), std::make_shared<SupForm>(rate, base_value),
                          Claims{.maximal = true, .convex = true, .sigma_continuous = true});
}

FunctionalHandle ldp_term(const ProbabilityMeasure& mu, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "ldp_term: n must be >= 1");
  return FunctionalHandle("ldp_term", mu.space(),
                          std::make_shared<ScaledLogIntegral>(mu, static_cast<double>(n), 0.0),
                          Claims{.maximal = false, .convex = true, .sigma_continuous = true});
}

FunctionalHandle linear(const ProbabilityMeasure& mu) {
  return FunctionalHandle("linear", mu.space(), std::make_shared<Linear>(mu),
                          Claims{.maximal = false, .convex = true, .sigma_continuous = true});
}

FunctionalHandle tail_limsup(SpacePtr half_line_space) {
  require_half_line(half_line_space);
  return FunctionalHandle("tail_limsup", std::move(half_line_space),
                          std::make_shared<TailLimsup>(),
                          Claims{.maximal = true, .convex = true, .sigma_continuous = false});
}

BoundedFunction make_tail_function(SpacePtr half_line_space, std::vector<double> grid_values,
                                   double tail) {
  require_half_line(half_line_space);
  if (grid_values.size() + 1 != half_line_space->size())
    throw Error(ErrorCode::SpaceMismatch, "tail function: grid value count does not match the grid");
  grid_values.push_back(tail);
  return BoundedFunction(std::move(half_line_space), std::move(grid_values));
}

double tail_value(const BoundedFunction& f) {
  require_half_line(f.space());
  return f.values().back();
}

BoundedFunction tail_witness(SpacePtr half_line_space, double n) {
  require_half_line(half_line_space);
  if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "tail_witness: n must be positive");
  std::vector<double> grid;
  for (std::size_t i = 0; i + 1 < half_line_space->size(); ++i)
    grid.push_back(std::min(1.0, *half_line_space->position(i) / n));
  return make_tail_function(std::move(half_line_space), std::move(grid), 1.0);
}

}  // namespace vf
