#include "duelsim/hyperparams.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "duelsim/errors.hpp"

namespace duelsim {

HyperMode parse_hyper_mode(std::string_view name) {
  if (name == "theory") return HyperMode::Theory;
  if (name == "practical") return HyperMode::Practical;
  throw ParameterError("unknown hyperparameter mode '" + std::string(name) + "'");
}

HyperParams default_hyperparams(HyperMode mode, std::size_t horizon, std::size_t d, std::size_t n,
                                double mu, double rho) {
  if (horizon <= d) throw ParameterError("horizon must exceed the dimension");
  if (d < 1) throw ParameterError("dimension must be at least 1");
  const double T = static_cast<double>(horizon);
  const double dd = static_cast<double>(d);

  HyperParams h;
  h.mle = default_mle_options(d);

  if (mode == HyperMode::Practical) {
    h.tau = d * n;
    h.c1 = std::sqrt(dd * std::log(T));
    h.c2 = h.c1;
    h.c_thresh = h.c1;
    h.relaxed_threshold = true;
    const std::size_t tau = h.tau;
    const double scale = dd * std::log(dd * T);
    h.coupling = [tau, scale](std::size_t t) {
      if (t <= tau) return 1.0;
      return std::min(1.0, scale / std::sqrt(static_cast<double>(t - tau)));
    };
    return h;
  }

  if (!(mu > 0.0) || !(rho > 0.0)) throw ParameterError("mu and rho must be positive");
  h.theory = {mu, rho};
  h.c1 = std::sqrt(dd * std::log(T / dd) + 2.0 * std::log(T)) / (2.0 * mu);
  h.c2 = h.c1;
  h.c_thresh = 0.5 * h.c2;
  const double extra = std::max(dd * dd * std::log(T) / (mu * mu * rho), dd / rho);
  h.tau = d + static_cast<std::size_t>(std::ceil(extra));
  const std::size_t tau = h.tau;
  const double scale =
      std::sqrt(2.0 * dd) / 2.0 * (3.0 * h.c1 + h.c2) * std::sqrt(std::log(2.0 * T / dd));
  h.coupling = [tau, scale](std::size_t t) {
    if (t <= tau) return 1.0;
    return std::min(1.0, scale / std::sqrt(static_cast<double>(t - tau)));
  };
  return h;
}

}  // namespace duelsim
