#pragma once

#include <cstddef>
#include <string_view>

#include "duelsim/policy.hpp"

namespace duelsim {

enum class HyperMode { Theory, Practical };

HyperMode parse_hyper_mode(std::string_view name);

/// CoLSTIM hyperparameter schedules. All logarithms are natural.
///
/// Theory:
///   c1   = sqrt(d ln(T/d) + 2 ln T) / (2 mu)
///   tau  = d + max(d^2 ln T / (mu^2 rho), d / rho)       (rounded up)
///   c2   = c1,  c_thresh = c2 / 2
///   p_t  = min(1, sqrt(2d) / (2 sqrt(t - tau)) (3 c1 + c2) sqrt(ln(2T/d)))
/// Practical (experiment settings):
///   tau  = d n,  c1 = c2 = c_thresh = sqrt(d ln T)
///   p_t  = min(1, d / sqrt(t - tau) * ln(d T))
/// During exploration (t <= tau) p_t is reported as 1.
///
/// Practical mode sets relaxed_threshold because c_thresh == c2 there.
/// Throws ParameterError when T <= d, or when mu/rho <= 0 in Theory mode.
HyperParams default_hyperparams(HyperMode mode, std::size_t horizon, std::size_t d, std::size_t n,
                                double mu = 0.25, double rho = 1.0);

}  // namespace duelsim
