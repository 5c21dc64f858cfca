#pragma once

#include <iosfwd>
#include <span>

#include <json.hpp>

#include "asynczoo/engine.hpp"
#include "asynczoo/stepsize.hpp"

namespace asynczoo {

/// Keys: alpha1, alpha2, alpha3, gamma, t_max, theta_ok, rate_bound, variant.
/// Non-finite numbers (rate_bound beyond t_max) become null.
nlohmann::json to_json(const StepPlan& plan);

/// Keys: variant, threads, k_done, wall_time_s, observed_staleness_max,
/// step_plan, grad_norm_sq, objective, final_x, plus staleness_exceeded and
/// the plan's warnings. Traces are arrays of [k, value] pairs; snapshots are
/// not serialized.
nlohmann::json to_json(const RunReport& report);

/// CSV with header "k,value".
void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out);

}  // namespace asynczoo
