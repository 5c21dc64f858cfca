#include "asynczoo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "asynczoo/error.hpp"

namespace asynczoo {

double ergodic_mean(std::span<const TracePoint> trace) {
  if (trace.empty()) throw ValidationError("ergodic mean of an empty trace");
  if (trace.size() == 1) return trace.front().value;
  double sum = 0.0;
  for (std::size_t s = 0; s + 1 < trace.size(); ++s) {
    const TracePoint& a = trace[s];
    const TracePoint& b = trace[s + 1];
    if (b.k <= a.k) throw ValidationError("trace k values must be strictly increasing");
    // sum over k = a.k .. b.k - 1 of the linear interpolant
    const double n = static_cast<double>(b.k - a.k);
    sum += n * a.value + (b.value - a.value) * (n - 1.0) / 2.0;
  }
  return sum / static_cast<double>(trace.back().k - trace.front().k);
}

double ergodic_grad_norm(const RunReport& report, const Problem& problem) {
  if (report.snapshots.empty()) throw ValidationError("report has no snapshots");
  std::vector<TracePoint> trace;
  trace.reserve(report.snapshots.size());
  for (const Snapshot& s : report.snapshots) trace.push_back({s.k, grad_norm_sq(problem, s.x)});
  return ergodic_mean(trace);
}

std::string_view to_string(SpeedupMode m) noexcept {
  return m == SpeedupMode::fixed_k ? "fixed_k" : "to_target";
}

SpeedupMode parse_speedup_mode(std::string_view name) {
  if (name == "fixed_k") return SpeedupMode::fixed_k;
  if (name == "to_target") return SpeedupMode::to_target;
  throw ValidationError("unknown speedup mode '" + std::string(name) +
                        "' (expected fixed_k or to_target)");
}

namespace {

SpeedupRow measure(const RunReport& r, SpeedupMode mode, std::optional<double> target) {
  SpeedupRow row;
  row.threads = r.threads;
  if (mode == SpeedupMode::fixed_k) {
    row.k_done = r.k_done;
    row.wall_time_s = r.wall_time_s;
    return row;
  }
  if (r.objective.size() != r.snapshots.size()) {
    throw ValidationError("to_target speedup needs an objective value for every snapshot");
  }
  row.reachable = false;
  for (std::size_t s = 0; s < r.snapshots.size(); ++s) {
    if (r.objective[s].value <= *target) {
      row.k_done = r.snapshots[s].k;
      row.wall_time_s = r.snapshots[s].time_s;
      row.reachable = true;
      break;
    }
  }
  return row;
}

}  // namespace

SpeedupTable speedup(std::span<const RunReport> reports, SpeedupMode mode,
                     std::optional<double> target_f) {
  if (mode == SpeedupMode::to_target && !target_f) {
    throw ValidationError("to_target speedup needs a target objective value");
  }
  const auto baselines = std::count_if(reports.begin(), reports.end(),
                                       [](const RunReport& r) { return r.threads == 1; });
  if (baselines != 1) {
    throw ValidationError("speedup needs exactly one single-thread baseline report");
  }

  SpeedupTable table;
  table.mode = mode;
  for (const RunReport& r : reports) table.rows.push_back(measure(r, mode, target_f));
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const SpeedupRow& a, const SpeedupRow& b) { return a.threads < b.threads; });

  const SpeedupRow base = table.rows.front();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (SpeedupRow& row : table.rows) {
    const double t = static_cast<double>(row.threads);
    if (!row.reachable || !base.reachable) {
      row.reachable = false;
      row.ccs = nan;
      row.rts = nan;
      continue;
    }
    if (row.threads == 1) {
      row.ccs = 1.0;
      row.rts = 1.0;
      continue;
    }
    row.ccs = mode == SpeedupMode::fixed_k
                  ? t
                  : static_cast<double>(base.k_done) / static_cast<double>(row.k_done) * t;
    row.rts = base.wall_time_s / row.wall_time_s;
  }
  return table;
}

std::string format_speedup_table(const SpeedupTable& table) {
  std::ostringstream out;
  auto cell = [&out](double v, bool ok) {
    if (ok) {
      out << std::setw(9) << std::fixed << std::setprecision(2) << v;
    } else {
      out << std::setw(9) << "-";
    }
  };
  out << std::left << std::setw(6) << "thr-#" << std::right;
  for (const auto& row : table.rows) out << std::setw(9) << row.threads;
  out << '\n' << std::left << std::setw(6) << "CCS" << std::right;
  for (const auto& row : table.rows) cell(row.ccs, row.reachable);
  out << '\n' << std::left << std::setw(6) << "RTS" << std::right;
  for (const auto& row : table.rows) cell(row.rts, row.reachable);
  out << '\n';
  return out.str();
}

void write_speedup_csv(const SpeedupTable& table, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "threads,k_done,wall_time_s,ccs,rts,reachable\n";
  for (const auto& row : table.rows) {
    out << row.threads << ',' << row.k_done << ',' << row.wall_time_s << ',' << row.ccs << ','
        << row.rts << ',' << (row.reachable ? 1 : 0) << '\n';
  }
  out.precision(old_precision);
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  if (pred.size() != truth.size()) {
    throw ValidationError("rmse: lengths differ (" + std::to_string(pred.size()) + " vs " +
                          std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw ValidationError("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - truth[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(pred.size()));
}

}  // namespace asynczoo
