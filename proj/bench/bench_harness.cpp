// Compares the serial reference harness against the OpenMP one and reports
// per-round selection cost of every policy.
//
//   bench_harness [runs] [horizon] [n] [d]

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include <omp.h>

#include "duelsim/config.hpp"
#include "duelsim/harness.hpp"
#include "duelsim/records.hpp"

int main(int argc, char** argv) {
  duelsim::ExperimentConfig cfg;
  cfg.runs = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 8;
  cfg.horizon = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
  cfg.n = argc > 3 ? std::strtoul(argv[3], nullptr, 10) : 50;
  cfg.d = argc > 4 ? std::strtoul(argv[4], nullptr, 10) : 10;
  cfg.policies = duelsim::parse_policy_list("random,colstim,maxinp,ss,dts");
  cfg.validate();

  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };

  const auto t0 = clock::now();
  const auto serial = duelsim::run_experiment_serial(cfg);
  const auto t1 = clock::now();
  const auto parallel = duelsim::run_experiment(cfg);
  const auto t2 = clock::now();

  bool same = serial.size() == parallel.size();
  for (std::size_t k = 0; same && k < serial.size(); ++k) {
    same = serial[k].rows.size() == parallel[k].rows.size() &&
           serial[k].rows.back().avg_regret_cum == parallel[k].rows.back().avg_regret_cum;
  }

  std::cout << std::fixed << std::setprecision(3);
  std::cout << "cells: " << serial.size() << "  T=" << cfg.horizon << " n=" << cfg.n
            << " d=" << cfg.d << "  threads=" << duelsim::resolve_thread_count(0) << "\n";
  std::cout << "serial   " << seconds(t1 - t0) << " s\n";
  std::cout << "openmp   " << seconds(t2 - t1) << " s  (speedup "
            << seconds(t1 - t0) / seconds(t2 - t1) << "x, results "
            << (same ? "identical" : "DIFFER") << ")\n\n";

  const auto summary = duelsim::summarize(serial);
  std::cout << std::left << std::setw(10) << "policy" << std::right << std::setw(16)
            << "select ns/round" << std::setw(16) << "final regret\n";
  for (const auto& ps : summary.policies) {
    std::cout << std::left << std::setw(10) << ps.policy << std::right << std::setw(16)
              << ps.select_seconds_mean * 1e9 / static_cast<double>(cfg.horizon) << std::setw(15)
              << ps.final_avg_mean << "\n";
  }
  return same ? 0 : 1;
}
