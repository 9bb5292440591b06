#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "duelsim/config.hpp"

namespace duelsim {

struct RoundRow {
  std::size_t t = 0;
  double avg_regret_cum = 0.0;
  double weak_regret_cum = 0.0;
  // select + update wall time for the round, estimator time excluded
  std::int64_t select_ns = 0;
};

/// One (run, policy) cell of an experiment.
struct RunRecord {
  std::size_t run = 0;
  std::string policy;
  std::vector<RoundRow> rows;
  std::int64_t estimator_ns = 0;
  std::string error;  // non-empty when the cell aborted

  bool ok() const { return error.empty(); }
};

/// Seeds of run `run`. Instance and context streams are shared by every
/// policy in the run; the feedback stream is too, so all policies see common
/// random numbers. Each policy's own stream is keyed by its label.
struct RunSeeds {
  std::uint64_t instance;
  std::uint64_t context;
  std::uint64_t feedback;
};
RunSeeds run_seeds(std::uint64_t master, std::size_t run);
std::uint64_t policy_seed(std::uint64_t master, std::size_t run, const std::string& label);

/// Executes T rounds of one policy on run `run`. Policy errors are caught and
/// reported through RunRecord::error.
RunRecord run_cell(const ExperimentConfig& config, std::size_t run, std::size_t policy_index);

/// Serial reference: cells in (run, policy) order on the calling thread.
std::vector<RunRecord> run_experiment_serial(const ExperimentConfig& config);

/// Same cells executed with OpenMP, at most `threads` at a time (0: use
/// DUELSIM_THREADS if set, else the OpenMP default). Output order and all
/// non-timing values match run_experiment_serial.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int threads = 0);

/// Thread count honoring the DUELSIM_THREADS cap.
int resolve_thread_count(int requested);

}  // namespace duelsim
