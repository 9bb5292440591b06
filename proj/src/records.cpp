#include "duelsim/records.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace duelsim {

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

void write_csv(std::span<const RunRecord> records, std::ostream& out) {
  out << kRecordsHeader << '\n';
  for (const auto& rec : records) {
    if (!rec.ok()) continue;
    for (const auto& row : rec.rows) {
      out << rec.run << ',' << row.t << ',' << rec.policy << ',' << format_double(row.avg_regret_cum)
          << ',' << format_double(row.weak_regret_cum) << ',' << row.select_ns << '\n';
    }
  }
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

template <typename T>
T parse_field(const std::string& field, std::size_t line) {
  T value{};
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("line " + std::to_string(line) + ": bad field '" + field + "'");
  }
  return value;
}

void population_stats(const std::vector<double>& xs, double& mean, double& stdev) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  stdev = std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace

void write_csv(std::span<const RunRecord> records, const std::string& path) {
  auto out = open_for_write(path);
  write_csv(records, out);
  finish(out, path);
}

std::vector<RunRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty records file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw std::runtime_error("unexpected header '" + line + "'");

  std::vector<RunRecord> records;
  std::map<std::pair<std::size_t, std::string>, std::size_t> index;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 6) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 6 fields");
    }
    const auto run = parse_field<std::size_t>(fields[0], lineno);
    const auto key = std::make_pair(run, fields[2]);
    auto [it, inserted] = index.try_emplace(key, records.size());
    if (inserted) {
      records.emplace_back();
      records.back().run = run;
      records.back().policy = fields[2];
    }
    records[it->second].rows.push_back({parse_field<std::size_t>(fields[1], lineno),
                                        parse_field<double>(fields[3], lineno),
                                        parse_field<double>(fields[4], lineno),
                                        parse_field<std::int64_t>(fields[5], lineno)});
  }
  return records;
}

std::vector<RunRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  try {
    return read_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

const PolicySummary& Summary::at(const std::string& policy) const {
  for (const auto& p : policies) {
    if (p.policy == policy) return p;
  }
  throw std::out_of_range("no summary for policy '" + policy + "'");
}

Summary summarize(std::span<const RunRecord> records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  std::size_t horizon = 0;
  bool any = false;
  for (const auto& rec : records) {
    if (!rec.ok()) continue;
    if (!any) {
      horizon = rec.rows.size();
      any = true;
    } else if (rec.rows.size() != horizon) {
      throw std::invalid_argument("records have mismatched horizons");
    }
    auto& group = groups[rec.policy];
    if (group.empty()) order.push_back(rec.policy);
    group.push_back(&rec);
  }
  if (!any) throw std::invalid_argument("no successful records to summarize");

  Summary summary;
  for (const auto& name : order) {
    const auto& group = groups[name];
    PolicySummary ps;
    ps.policy = name;
    ps.runs = group.size();
    ps.curve.resize(horizon);
    std::vector<double> avg(group.size()), weak(group.size());
    for (std::size_t t = 0; t < horizon; ++t) {
      for (std::size_t r = 0; r < group.size(); ++r) {
        avg[r] = group[r]->rows[t].avg_regret_cum;
        weak[r] = group[r]->rows[t].weak_regret_cum;
      }
      CurvePoint& cp = ps.curve[t];
      cp.t = group.front()->rows[t].t;
      population_stats(avg, cp.avg_mean, cp.avg_std);
      population_stats(weak, cp.weak_mean, cp.weak_std);
    }
    if (horizon > 0) {
      ps.final_avg_mean = ps.curve.back().avg_mean;
      ps.final_avg_std = ps.curve.back().avg_std;
      ps.final_weak_mean = ps.curve.back().weak_mean;
      ps.final_weak_std = ps.curve.back().weak_std;
    }
    std::vector<double> sel(group.size()), est(group.size());
    for (std::size_t r = 0; r < group.size(); ++r) {
      std::int64_t total = 0;
      for (const auto& row : group[r]->rows) total += row.select_ns;
      sel[r] = static_cast<double>(total) * 1e-9;
      est[r] = static_cast<double>(group[r]->estimator_ns) * 1e-9;
    }
    population_stats(sel, ps.select_seconds_mean, ps.select_seconds_std);
    population_stats(est, ps.estimator_seconds_mean, ps.estimator_seconds_std);
    summary.policies.push_back(std::move(ps));
  }
  return summary;
}

void write_curves_csv(const Summary& summary, std::ostream& out) {
  out << kCurveHeader << '\n';
  for (const auto& ps : summary.policies) {
    for (const auto& cp : ps.curve) {
      out << ps.policy << ',' << cp.t << ',' << format_double(cp.avg_mean) << ','
          << format_double(cp.avg_std) << ',' << format_double(cp.weak_mean) << ','
          << format_double(cp.weak_std) << '\n';
    }
  }
}

void write_curves_csv(const Summary& summary, const std::string& path) {
  auto out = open_for_write(path);
  write_curves_csv(summary, out);
  finish(out, path);
}

void write_totals_csv(const Summary& summary, std::ostream& out) {
  out << kTotalsHeader << '\n';
  for (const auto& ps : summary.policies) {
    out << ps.policy << ',' << ps.runs << ',' << format_double(ps.final_avg_mean) << ','
        << format_double(ps.final_avg_std) << ',' << format_double(ps.final_weak_mean) << ','
        << format_double(ps.final_weak_std) << ',' << format_double(ps.select_seconds_mean) << ','
        << format_double(ps.select_seconds_std) << ',' << format_double(ps.estimator_seconds_mean)
        << ',' << format_double(ps.estimator_seconds_std) << '\n';
  }
}

void write_totals_csv(const Summary& summary, const std::string& path) {
  auto out = open_for_write(path);
  write_totals_csv(summary, out);
  finish(out, path);
}

}  // namespace duelsim
