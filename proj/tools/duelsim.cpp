// duelsim: run contextual dueling bandit experiments from a config file.
//
//   duelsim run --config <path> [--seed N] [--out <path>] [--threads K]
//   duelsim summarize --in <csv> --out <csv> [--totals <csv>]
//   duelsim hyperparams --mode practical --d 10 --n 50 --horizon 10000
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "duelsim/config.hpp"
#include "duelsim/errors.hpp"
#include "duelsim/harness.hpp"
#include "duelsim/hyperparams.hpp"
#include "duelsim/records.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_path, int threads) {
  duelsim::ExperimentConfig config = duelsim::load_config(config_path);
  if (seed) config.seed = *seed;
  const std::string out = out_path.empty() ? config.output : out_path;

  const auto records = duelsim::run_experiment(config, threads);
  duelsim::write_csv(records, out);

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.ok() ? 0 : 1;
  const auto summary = duelsim::summarize(records);
  std::cout << "wrote " << out << " (" << records.size() - failed << " cells";
  if (failed) std::cout << ", " << failed << " failed";
  std::cout << ")\n";
  duelsim::write_totals_csv(summary, std::cout);
  return failed ? kRuntimeError : 0;
}

int cmd_summarize(const std::string& in, const std::string& out, const std::string& totals) {
  const auto records = duelsim::read_csv(in);
  const auto summary = duelsim::summarize(records);
  duelsim::write_curves_csv(summary, out);
  if (!totals.empty()) duelsim::write_totals_csv(summary, totals);
  duelsim::write_totals_csv(summary, std::cout);
  return 0;
}

int cmd_hyperparams(const std::string& mode, std::size_t d, std::size_t n, std::size_t horizon,
                    double mu, double rho) {
  const auto h = duelsim::default_hyperparams(duelsim::parse_hyper_mode(mode), horizon, d, n, mu, rho);
  std::cout << std::setprecision(10);
  std::cout << "mode = " << mode << "\n"
            << "c1 = " << h.c1 << "\n"
            << "c2 = " << h.c2 << "\n"
            << "c_thresh = " << h.c_thresh << "\n"
            << "tau = " << h.tau << "\n";
  if (h.relaxed_threshold) {
    std::cout << "# note: c_thresh == c2, outside the strict ordering c_thresh < c2\n";
  }
  std::cout << "t,p_t\n";
  std::vector<std::size_t> ts;
  for (std::size_t step = 1; h.tau + step <= horizon; step *= 10) ts.push_back(h.tau + step);
  if (ts.empty() || ts.back() != horizon) ts.push_back(horizon);
  for (std::size_t t : ts) std::cout << t << ',' << h.coupling_probability(t) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual dueling bandit simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("--config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--out", out_path, "Output CSV (default: the config's output key)");
  run->add_option("--threads", threads, "Concurrent cells (capped by DUELSIM_THREADS)");

  std::string in_path, summary_out, totals_out;
  auto* summarize = app.add_subcommand("summarize", "Per-round mean/std curves from a records CSV");
  summarize->add_option("--in", in_path, "Records CSV")->required();
  summarize->add_option("--out", summary_out, "Curve CSV")->required();
  summarize->add_option("--totals", totals_out, "Optional totals CSV");

  std::string mode = "practical";
  std::size_t d = 10, n = 50, horizon = 10000;
  double mu = 0.25, rho = 1.0;
  auto* hyper = app.add_subcommand("hyperparams", "Print the CoLSTIM hyperparameter schedule");
  hyper->add_option("--mode", mode, "practical | theory")->capture_default_str();
  hyper->add_option("--d", d, "Context dimension")->capture_default_str();
  hyper->add_option("--n", n, "Number of arms")->capture_default_str();
  hyper->add_option("--horizon", horizon, "Horizon T")->capture_default_str();
  hyper->add_option("--mu", mu, "Theory mode: derivative lower bound")->capture_default_str();
  hyper->add_option("--rho", rho, "Theory mode: context spread")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, seed, out_path, threads);
    if (*summarize) return cmd_summarize(in_path, summary_out, totals_out);
    if (*hyper) return cmd_hyperparams(mode, d, n, horizon, mu, rho);
  } catch (const duelsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const duelsim::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
