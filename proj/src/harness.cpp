#include "duelsim/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>

#include <omp.h>

#include "duelsim/environment.hpp"
#include "duelsim/random.hpp"

namespace duelsim {

RunSeeds run_seeds(std::uint64_t master, std::size_t run) {
  return {derive_seed(master, run, 1), derive_seed(master, run, 2), derive_seed(master, run, 3)};
}

std::uint64_t policy_seed(std::uint64_t master, std::size_t run, const std::string& label) {
  return derive_seed(master, run, label_hash(label));
}

RunRecord run_cell(const ExperimentConfig& config, std::size_t run, std::size_t policy_index) {
  const PolicySpec& spec = config.policies.at(policy_index);
  RunRecord record;
  record.run = run;
  record.policy = spec.label;
  try {
    const RunSeeds seeds = run_seeds(config.seed, run);
    Stream instance_stream(seeds.instance);
    const ProblemInstance instance =
        generate_instance(config.scenario, config.n, config.d, induced_model(config.true_noise),
                          config.true_noise, instance_stream);
    Stream context_stream(seeds.context);
    Stream feedback_stream(seeds.feedback);

    auto policy = make_policy(spec, config, policy_seed(config.seed, run, spec.label));
    record.rows.reserve(config.horizon);
    RegretLedger ledger;
    using clock = std::chrono::steady_clock;
    for (std::size_t t = 1; t <= config.horizon; ++t) {
      const ContextMatrix ctx = sample_context(instance, context_stream);

      const std::int64_t est_before = policy->estimator_ns();
      const auto start = clock::now();
      const ArmPair pair = policy->select(ctx);
      const auto picked = clock::now();
      const int outcome = sample_feedback(instance, ctx, pair.first, pair.second, feedback_stream);
      const auto updating = clock::now();
      policy->update(ctx, pair, outcome);
      const auto done = clock::now();

      const std::int64_t elapsed =
          std::chrono::duration_cast<std::chrono::nanoseconds>((picked - start) + (done - updating))
              .count() -
          (policy->estimator_ns() - est_before);

      ledger.record(instant_regret(instance, ctx, pair.first, pair.second));
      record.rows.push_back(
          {t, ledger.total_average(), ledger.total_weak(), std::max<std::int64_t>(0, elapsed)});
    }
    record.estimator_ns = policy->estimator_ns();
  } catch (const std::exception& e) {
    record.error = e.what();
    record.rows.clear();
#pragma omp critical(duelsim_log)
    std::clog << "run " << run << ", policy '" << spec.label << "' aborted: " << e.what() << '\n';
  }
  return record;
}

std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& config) {
  config.validate();
  std::vector<RunRecord> records;
  records.reserve(config.runs * config.policies.size());
  for (std::size_t run = 0; run < config.runs; ++run) {
    for (std::size_t p = 0; p < config.policies.size(); ++p) {
      records.push_back(run_cell(config, run, p));
    }
  }
  return records;
}

int resolve_thread_count(int requested) {
  int threads = requested > 0 ? requested : omp_get_max_threads();
  if (const char* cap = std::getenv("DUELSIM_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit > 0 && limit < threads) threads = limit;
  }
  return threads < 1 ? 1 : threads;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  const std::size_t policies = config.policies.size();
  const auto cells = static_cast<std::int64_t>(config.runs * policies);
  std::vector<RunRecord> records(static_cast<std::size_t>(cells));
  const int nthreads = resolve_thread_count(threads);

#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (std::int64_t cell = 0; cell < cells; ++cell) {
    const auto c = static_cast<std::size_t>(cell);
    records[c] = run_cell(config, c / policies, c % policies);
  }
  return records;
}

}  // namespace duelsim
