#pragma once

// Experiment configuration.
//
// File grammar: one `key = value` per line; `#` starts a comment; blank lines
// are ignored; keys are case-sensitive; later duplicates override earlier ones.
//
//   scenario          easy | medium | hard                       (easy)
//   n, d              arm count, context dimension               (20, 5)
//   horizon           rounds per run T                           (1000)
//   runs              independent runs                           (1)
//   seed              master seed                                (1)
//   policies          comma list of policy specs                 (colstim,random)
//   true_noise        gumbel | gaussian | exponential            (gumbel)
//   true_noise_scale  scale of G*                                (1)
//   assumed_noise     G used by CoLSTIM-type policies            (= true_noise)
//   assumed_noise_scale                                          (1)
//   estimator         sgd | mle                                  (sgd)
//   hyper_mode        practical | theory                         (practical)
//   mu, rho           theory-mode constants                      (0.25, 1)
//   learning_rate     SGD rate                                   (0.5)
//   ridge             Gram initialization constant               (1e-6)
//   output            default CSV path for `duelsim run`         (results.csv)
//
// A policy spec is `kind` or `kind[key=value;key=value]` with kind one of
// colstim, sup-colstim, maxinp, dts, ss, random. Options: estimator, noise,
// c1, c_thresh, tau, lr, label. The label (default: the spec text) names the
// policy in the output and must be unique.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "duelsim/environment.hpp"
#include "duelsim/hyperparams.hpp"
#include "duelsim/policy.hpp"

namespace duelsim {

struct PolicySpec {
  std::string kind;
  std::string label;
  std::map<std::string, std::string> options;
};

/// Throws ConfigError on malformed text or an unknown kind.
PolicySpec parse_policy_spec(std::string_view text);
std::vector<PolicySpec> parse_policy_list(std::string_view text);

struct ExperimentConfig {
  Scenario scenario = Scenario::Easy;
  std::size_t n = 20;
  std::size_t d = 5;
  std::size_t horizon = 1000;
  std::size_t runs = 1;
  std::uint64_t seed = 1;
  std::vector<PolicySpec> policies = parse_policy_list("colstim,random");
  PerturbationDistribution true_noise = PerturbationDistribution::gumbel();
  PerturbationDistribution assumed_noise = PerturbationDistribution::gumbel();
  EstimatorMode estimator = EstimatorMode::SGD;
  HyperMode hyper_mode = HyperMode::Practical;
  double mu = 0.25;
  double rho = 1.0;
  double learning_rate = 0.5;
  double ridge = 1e-6;
  std::string output = "results.csv";

  /// Throws ConfigError: runs >= 1, n >= 2, d >= 1, T > tau of every policy,
  /// unique labels.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in, std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Exploration length a policy will use under `config` (0 for DTS/SS/Random).
std::size_t exploration_length(const PolicySpec& spec, const ExperimentConfig& config);

/// CoLSTIM-family hyperparameters for `spec`, options applied.
HyperParams resolve_hyperparams(const PolicySpec& spec, const ExperimentConfig& config);

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ExperimentConfig& config,
                                    std::uint64_t seed);

}  // namespace duelsim
