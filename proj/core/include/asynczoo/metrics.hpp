#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asynczoo/engine.hpp"

namespace asynczoo {

/// Mean of a sampled trace over every integer k in [k_first, k_last), with
/// values between samples filled in linearly. A single sample returns its
/// value. For a stride-1 trace over 0..K this is sum_{k<K} value_k / K.
double ergodic_mean(std::span<const TracePoint> trace);

/// (1/K) sum_k ||grad f(x_k)||^2 estimated from the report's snapshots.
/// Throws ValidationError when there are none.
double ergodic_grad_norm(const RunReport& report, const Problem& problem);

enum class SpeedupMode { fixed_k, to_target };

std::string_view to_string(SpeedupMode m) noexcept;
SpeedupMode parse_speedup_mode(std::string_view name);

struct SpeedupRow {
  std::size_t threads = 1;
  std::uint64_t k_done = 0;     // updates counted (to the target in to_target mode)
  double wall_time_s = 0.0;     // time counted (to the target in to_target mode)
  double ccs = 0.0;
  double rts = 0.0;
  bool reachable = true;
};

struct SpeedupTable {
  SpeedupMode mode = SpeedupMode::fixed_k;
  std::vector<SpeedupRow> rows;  // sorted by threads; rows[0] is the baseline
};

/// CCS(T) = K_1 / K_T * T and RTS(T) = t_1 / t_T against the single-thread
/// report. fixed_k counts the whole run (CCS = T); to_target counts up to
/// the first snapshot with objective <= target_f. Exactly one report must
/// have threads == 1.
SpeedupTable speedup(std::span<const RunReport> reports, SpeedupMode mode,
                     std::optional<double> target_f = std::nullopt);

/// Aligned text: a "thr-#" header row followed by CCS and RTS rows.
std::string format_speedup_table(const SpeedupTable& table);
/// CSV: threads,k_done,wall_time_s,ccs,rts,reachable.
void write_speedup_csv(const SpeedupTable& table, std::ostream& out);

/// sqrt(mean((pred - truth)^2)). Throws ValidationError on a length mismatch
/// or empty input.
double rmse(std::span<const double> pred, std::span<const double> truth);

}  // namespace asynczoo
