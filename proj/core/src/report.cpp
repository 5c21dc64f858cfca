#include "asynczoo/report.hpp"

#include <cmath>
#include <ostream>
#include <string>

namespace asynczoo {

namespace {

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json trace_json(std::span<const TracePoint> trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const TracePoint& p : trace) out.push_back({p.k, number(p.value)});
  return out;
}

}  // namespace

nlohmann::json to_json(const StepPlan& plan) {
  return {
      {"alpha1", number(plan.alpha1)},
      {"alpha2", number(plan.alpha2)},
      {"alpha3", number(plan.alpha3)},
      {"gamma", number(plan.gamma)},
      {"t_max", number(plan.t_max)},
      {"theta_ok", plan.theta_ok},
      {"rate_bound", number(plan.rate_bound)},
      {"variant", std::string(to_string(plan.variant))},
  };
}

nlohmann::json to_json(const RunReport& report) {
  nlohmann::json final_x = nlohmann::json::array();
  for (double v : report.final_x) final_x.push_back(number(v));
  return {
      {"variant", std::string(to_string(report.variant))},
      {"threads", report.threads},
      {"k_done", report.k_done},
      {"wall_time_s", report.wall_time_s},
      {"observed_staleness_max", report.observed_staleness_max},
      {"staleness_exceeded", report.staleness_exceeded},
      {"step_plan", to_json(report.step_plan)},
      {"warnings", report.step_plan.warnings},
      {"grad_norm_sq", trace_json(report.grad_norm_sq)},
      {"objective", trace_json(report.objective)},
      {"final_x", std::move(final_x)},
  };
}

void write_trace_csv(std::span<const TracePoint> trace, std::ostream& out) {
  const auto old_precision = out.precision(17);
  out << "k,value\n";
  for (const TracePoint& p : trace) out << p.k << ',' << p.value << '\n';
  out.precision(old_precision);
}

}  // namespace asynczoo
