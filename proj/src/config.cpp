#include "duelsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "duelsim/baselines.hpp"
#include "duelsim/colstim.hpp"
#include "duelsim/errors.hpp"
#include "duelsim/sup_colstim.hpp"

namespace duelsim {

namespace {

const std::set<std::string, std::less<>> kKinds = {"colstim", "sup-colstim", "maxinp",
                                                   "dts",     "ss",          "random"};
const std::set<std::string, std::less<>> kOptions = {"estimator", "noise", "c1", "c_thresh",
                                                     "tau",       "lr",    "label"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(std::string_view key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError("bad value for '" + std::string(key) + "': '" + value + "'");
  }
  return out;
}

EstimatorMode parse_estimator(const std::string& value) {
  if (value == "sgd") return EstimatorMode::SGD;
  if (value == "mle" || value == "full" || value == "fullmle") return EstimatorMode::FullMLE;
  throw ConfigError("unknown estimator '" + value + "'");
}

const std::string* option(const PolicySpec& spec, std::string_view key) {
  auto it = spec.options.find(std::string(key));
  return it == spec.options.end() ? nullptr : &it->second;
}

}  // namespace

PolicySpec parse_policy_spec(std::string_view text) {
  const std::string spec_text = trim(text);
  PolicySpec spec;
  const auto open = spec_text.find('[');
  spec.kind = trim(spec_text.substr(0, open));
  if (!kKinds.contains(spec.kind)) throw ConfigError("unknown policy kind '" + spec.kind + "'");
  if (open != std::string::npos) {
    if (spec_text.back() != ']') throw ConfigError("unterminated option list in '" + spec_text + "'");
    std::stringstream body(spec_text.substr(open + 1, spec_text.size() - open - 2));
    std::string item;
    while (std::getline(body, item, ';')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ConfigError("policy option without '=': '" + item + "'");
      std::string key = trim(item.substr(0, eq));
      if (!kOptions.contains(key)) throw ConfigError("unknown policy option '" + key + "'");
      spec.options[key] = trim(item.substr(eq + 1));
    }
  }
  const std::string* label = option(spec, "label");
  spec.label = label ? *label : spec_text;
  if (spec.label.empty() || spec.label.find_first_of(",\"\n") != std::string::npos) {
    throw ConfigError("policy label must be non-empty without commas or quotes: '" + spec.label + "'");
  }
  return spec;
}

std::vector<PolicySpec> parse_policy_list(std::string_view text) {
  std::vector<PolicySpec> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= text.size(); ++k) {
    if (k < text.size() && text[k] == '[') ++depth;
    if (k < text.size() && text[k] == ']') --depth;
    if (k == text.size() || (text[k] == ',' && depth == 0)) {
      const std::string item = trim(text.substr(start, k - start));
      if (!item.empty()) out.push_back(parse_policy_spec(item));
      start = k + 1;
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (n < 2) throw ConfigError("n must be at least 2");
  if (d < 1) throw ConfigError("d must be at least 1");
  if (scenario == Scenario::Custom) throw ConfigError("custom scenarios are library-only");
  if (policies.empty()) throw ConfigError("no policies configured");
  if (horizon <= d) throw ConfigError("horizon must exceed d");
  std::set<std::string> labels;
  for (const auto& p : policies) {
    if (!labels.insert(p.label).second) throw ConfigError("duplicate policy label '" + p.label + "'");
    const std::size_t tau = exploration_length(p, *this);
    if (horizon <= tau) {
      throw ConfigError("horizon " + std::to_string(horizon) + " must exceed exploration length " +
                        std::to_string(tau) + " of policy '" + p.label + "'");
    }
  }
}

ExperimentConfig parse_config(std::istream& in, std::string_view source) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  std::string assumed_kind;
  double assumed_scale = 1.0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));

      if (key == "scenario") cfg.scenario = parse_scenario(value);
      else if (key == "n") cfg.n = parse_number<std::size_t>(key, value);
      else if (key == "d") cfg.d = parse_number<std::size_t>(key, value);
      else if (key == "horizon" || key == "T") cfg.horizon = parse_number<std::size_t>(key, value);
      else if (key == "runs") cfg.runs = parse_number<std::size_t>(key, value);
      else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
      else if (key == "policies") cfg.policies = parse_policy_list(value);
      else if (key == "true_noise") cfg.true_noise.kind = parse_noise_kind(value);
      else if (key == "true_noise_scale") cfg.true_noise.scale = parse_number<double>(key, value);
      else if (key == "assumed_noise") assumed_kind = value;
      else if (key == "assumed_noise_scale") assumed_scale = parse_number<double>(key, value);
      else if (key == "estimator") cfg.estimator = parse_estimator(value);
      else if (key == "hyper_mode") cfg.hyper_mode = parse_hyper_mode(value);
      else if (key == "mu") cfg.mu = parse_number<double>(key, value);
      else if (key == "rho") cfg.rho = parse_number<double>(key, value);
      else if (key == "learning_rate") cfg.learning_rate = parse_number<double>(key, value);
      else if (key == "ridge") cfg.ridge = parse_number<double>(key, value);
      else if (key == "output") cfg.output = value;
      else throw ConfigError("unknown key '" + key + "'");
    }
    cfg.assumed_noise = assumed_kind.empty()
                            ? cfg.true_noise
                            : PerturbationDistribution{parse_noise_kind(assumed_kind), 0.0, assumed_scale};
    if (!(cfg.true_noise.scale > 0.0) || !(cfg.assumed_noise.scale > 0.0)) {
      throw ConfigError("noise scales must be positive");
    }
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ":" + std::to_string(lineno) + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

HyperParams resolve_hyperparams(const PolicySpec& spec, const ExperimentConfig& config) {
  HyperParams h = default_hyperparams(config.hyper_mode, config.horizon, config.d, config.n,
                                      config.mu, config.rho);
  h.perturbation = config.assumed_noise;
  if (const auto* v = option(spec, "noise")) {
    h.perturbation = {parse_noise_kind(*v), 0.0, config.assumed_noise.scale};
  }
  h.assumed_model = induced_model(h.perturbation);
  h.estimator_mode = config.estimator;
  if (const auto* v = option(spec, "estimator")) h.estimator_mode = parse_estimator(*v);
  h.learning_rate = config.learning_rate;
  if (const auto* v = option(spec, "lr")) h.learning_rate = parse_number<double>("lr", *v);
  h.ridge = config.ridge;
  if (const auto* v = option(spec, "c1")) {
    const double c1 = parse_number<double>("c1", *v);
    // keep the practical coupling c1 = c2 (= c_thresh) when only c1 is given
    const bool tied = h.c_thresh == h.c1;
    h.c1 = c1;
    h.c2 = c1;
    h.c_thresh = tied ? c1 : 0.5 * c1;
  }
  if (const auto* v = option(spec, "c_thresh")) h.c_thresh = parse_number<double>("c_thresh", *v);
  if (const auto* v = option(spec, "tau")) {
    const std::size_t tau = parse_number<std::size_t>("tau", *v);
    const CouplingSchedule base = h.coupling;
    const std::size_t old_tau = h.tau;
    // re-anchor the schedule at the new exploration length
    h.coupling = [base, tau, old_tau](std::size_t t) {
      if (t <= tau) return 1.0;
      return base(t - tau + old_tau);
    };
    h.tau = tau;
  }
  return h;
}

std::size_t exploration_length(const PolicySpec& spec, const ExperimentConfig& config) {
  if (spec.kind == "colstim" || spec.kind == "sup-colstim") {
    try {
      return resolve_hyperparams(spec, config).tau;
    } catch (const ParameterError& e) {
      throw ConfigError("policy '" + spec.label + "': " + e.what());
    }
  }
  if (spec.kind == "maxinp") {
    if (const auto* v = option(spec, "tau")) return parse_number<std::size_t>("tau", *v);
    return config.d * config.n;
  }
  return 0;
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const ExperimentConfig& config,
                                    std::uint64_t seed) {
  if (spec.kind == "colstim") {
    return std::make_unique<ColstimPolicy>(resolve_hyperparams(spec, config), config.n, config.d,
                                           seed);
  }
  if (spec.kind == "sup-colstim") {
    return std::make_unique<SupColstimPolicy>(resolve_hyperparams(spec, config), config.n,
                                              config.d, config.horizon, seed);
  }
  if (spec.kind == "maxinp") {
    MaxInpParams p = default_maxinp_params(config.horizon, config.d, config.n);
    p.estimator_mode = config.estimator;
    if (const auto* v = option(spec, "estimator")) p.estimator_mode = parse_estimator(*v);
    p.learning_rate = config.learning_rate;
    if (const auto* v = option(spec, "lr")) p.learning_rate = parse_number<double>("lr", *v);
    if (const auto* v = option(spec, "tau")) p.t0 = parse_number<std::size_t>("tau", *v);
    if (const auto* v = option(spec, "c1")) p.eta = parse_number<double>("c1", *v);
    p.ridge = config.ridge;
    return std::make_unique<MaxInpPolicy>(p, config.n, config.d, seed);
  }
  if (spec.kind == "dts") return std::make_unique<DtsPolicy>(config.n, seed);
  if (spec.kind == "ss") return std::make_unique<SelfSparringPolicy>(config.n, seed);
  if (spec.kind == "random") return std::make_unique<RandomPolicy>(config.n, seed);
  throw ConfigError("unknown policy kind '" + spec.kind + "'");
}

}  // namespace duelsim
