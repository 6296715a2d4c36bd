#include "varadhan/log_sum_exp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "varadhan/error.hpp"

namespace vf {

double log_sum_exp(std::span<const double> args) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (args.empty()) return kNegInf;
  const double max_arg = *std::max_element(args.begin(), args.end());
  if (max_arg == kNegInf) return kNegInf;
  if (std::isinf(max_arg)) return max_arg;

  double sum = 0.0;
  for (double a : args) sum += std::exp(a - max_arg);
  return max_arg + std::log(sum);
}

double log_sum_exp_weighted(std::span<const double> values,
                            std::span<const double> log_weights,
                            double scale) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (values.size() != log_weights.size())
    throw Error(ErrorCode::SpaceMismatch, "log_sum_exp_weighted: length mismatch");

  double max_arg = kNegInf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (log_weights[i] == kNegInf) continue;
    max_arg = std::max(max_arg, scale * values[i] + log_weights[i]);
  }
  if (max_arg == kNegInf || std::isinf(max_arg)) return max_arg;

  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (log_weights[i] == kNegInf) continue;
    sum += std::exp(scale * values[i] + log_weights[i] - max_arg);
  }
  return max_arg + std::log(sum);
}

}  // namespace vf
