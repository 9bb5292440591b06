#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "duelsim/harness.hpp"

namespace duelsim {

inline constexpr const char* kRecordsHeader =
    "run,t,policy,avg_regret_cum,weak_regret_cum,select_ns";
inline constexpr const char* kCurveHeader = "policy,t,avg_mean,avg_std,weak_mean,weak_std";
inline constexpr const char* kTotalsHeader =
    "policy,runs,final_avg_mean,final_avg_std,final_weak_mean,final_weak_std,"
    "select_s_mean,select_s_std,estimator_s_mean,estimator_s_std";

/// Shortest decimal that parses back to exactly `x`.
std::string format_double(double x);

/// One row per (run, t, policy) of every successful record; LF line endings.
void write_csv(std::span<const RunRecord> records, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(std::span<const RunRecord> records, const std::string& path);

/// Inverse of write_csv: rows are grouped back into (run, policy) records in
/// order of first appearance. estimator_ns is not part of the format and is 0.
std::vector<RunRecord> read_csv(std::istream& in);
std::vector<RunRecord> read_csv(const std::string& path);

struct CurvePoint {
  std::size_t t = 0;
  double avg_mean = 0.0;
  double avg_std = 0.0;
  double weak_mean = 0.0;
  double weak_std = 0.0;
};

struct PolicySummary {
  std::string policy;
  std::size_t runs = 0;
  std::vector<CurvePoint> curve;
  double final_avg_mean = 0.0;
  double final_avg_std = 0.0;
  double final_weak_mean = 0.0;
  double final_weak_std = 0.0;
  double select_seconds_mean = 0.0;
  double select_seconds_std = 0.0;
  double estimator_seconds_mean = 0.0;
  double estimator_seconds_std = 0.0;
};

struct Summary {
  std::vector<PolicySummary> policies;  // order of first appearance

  const PolicySummary& at(const std::string& policy) const;
};

/// Mean and standard deviation across runs, per policy and round. The
/// standard deviation is the population one (divide by the run count), so a
/// single run reports 0. Failed records are skipped. Throws
/// std::invalid_argument when no successful record exists or horizons differ.
Summary summarize(std::span<const RunRecord> records);

void write_curves_csv(const Summary& summary, std::ostream& out);
void write_curves_csv(const Summary& summary, const std::string& path);
void write_totals_csv(const Summary& summary, std::ostream& out);
void write_totals_csv(const Summary& summary, const std::string& path);

}  // namespace duelsim
