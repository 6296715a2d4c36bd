#pragma once

#include <span>

namespace vf {

// log(sum_i exp(args[i])), shifted by the max argument so that no term
// overflows. -inf entries contribute nothing; an empty or all -inf input
// returns -inf.
double log_sum_exp(std::span<const double> args);

// log(sum_i exp(scale * values[i] + log_weights[i])) without materializing
// the shifted vector.
double log_sum_exp_weighted(std::span<const double> values,
                            std::span<const double> log_weights,
                            double scale = 1.0);

}  // namespace vf
