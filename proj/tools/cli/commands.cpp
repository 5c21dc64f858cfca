#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "asynczoo/engine.hpp"
#include "asynczoo/error.hpp"
#include "asynczoo/estimation.hpp"
#include "asynczoo/metrics.hpp"
#include "asynczoo/problems.hpp"
#include "asynczoo/report.hpp"
#include "asynczoo/stepsize.hpp"
#include "asynczoo/verification.hpp"

#ifndef ASYNCZOO_BUILD_ID
#define ASYNCZOO_BUILD_ID "unknown"
#endif

namespace asynczoo::cli {

const char* build_id() noexcept { return ASYNCZOO_BUILD_ID; }

namespace {

struct Resolved {
  ExperimentConfig config;  // with sigma2 and mu filled in
  ProblemPtr problem;
  StepPlan plan;
};

Resolved resolve(const ExperimentConfig& cfg) {
  Resolved r{cfg, build_problem(cfg.problem, cfg.seed), {}};
  const Variant variant = parse_variant(cfg.variant);
  if (cfg.k == 0) throw ValidationError("k must be >= 1");
  const Problem& problem = *r.problem;

  PlanRequest req = request_for(problem, variant, cfg.k, cfg.staleness, 0.0);
  if (cfg.mu) req.mu = MuVector::uniform(problem.dim(), *cfg.mu);
  req.block = cfg.block;
  req.gamma = cfg.gamma;

  if (cfg.sigma2) {
    req.sigma2 = *cfg.sigma2;
  } else if (variant == Variant::ascd || problem.num_components() == 1) {
    req.sigma2 = 0.0;
  } else {
    std::optional<double> fd_step;
    if (!problem.has_gradient()) {
      fd_step = cfg.mu.value_or(1.0 / std::sqrt(static_cast<double>(cfg.k)));
    }
    req.sigma2 = estimate_sigma2(problem, problem.initial_point(), cfg.sigma2_samples, cfg.seed,
                                 fd_step);
  }

  r.plan = make_plan(req);
  r.config.sigma2 = r.plan.config.sigma2;
  if (r.plan.mu && !cfg.mu) r.config.mu = (*r.plan.mu)[0];
  return r;
}

void print_plan(const Resolved& r, std::ostream& out) {
  const StepPlan& p = r.plan;
  out << "variant        " << to_string(p.variant) << '\n'
      << "problem        " << r.problem->kind() << " (N = " << r.problem->dim() << ")\n"
      << std::setprecision(6) << "sigma2         " << p.config.sigma2 << '\n'
      << "gamma          " << p.gamma << '\n'
      << "t_max          " << p.t_max << '\n'
      << "theta_ok       " << (p.theta_ok ? "true" : "false") << '\n'
      << "rate_bound     " << p.rate_bound << '\n';
  for (const auto& w : p.warnings) out << "warning: " << w << '\n';
}

void require_admissible(const Resolved& r) {
  if (r.plan.theta_ok || r.config.force) return;
  std::ostringstream msg;
  msg << "step size " << r.plan.gamma << " is not admissible for staleness "
      << r.plan.config.staleness << " (margin " << theta_margin(r.plan.config, r.plan.gamma)
      << " < 0); rerun with --force to ignore";
  throw PrerequisiteViolated(msg.str());
}

DelayModel delay_for(const ExperimentConfig& cfg) {
  switch (parse_delay_kind(cfg.delay)) {
    case DelayKind::none: return DelayModel::none();
    case DelayKind::fixed: return DelayModel::fixed(cfg.staleness);
    case DelayKind::uniform: return DelayModel::uniform(cfg.staleness);
    case DelayKind::trace: break;
  }
  throw ValidationError("delay 'trace' is only available through the library");
}

RunOptions options_for(const ExperimentConfig& cfg, bool traces) {
  RunOptions o;
  o.iterations = cfg.k;
  o.seed = cfg.seed;
  o.snapshot_stride = cfg.snapshot_stride;
  o.force = cfg.force;
  o.compute_traces = traces;
  return o;
}

RunReport execute(const Resolved& r, std::size_t threads, bool traces) {
  const RunOptions o = options_for(r.config, traces);
  if (threads == 0) return run_simulated(*r.problem, r.plan, delay_for(r.config), o);
  return run_async(*r.problem, r.plan, threads, o);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigIoError("cannot write '" + path + "'");
  f.exceptions(std::ios::badbit | std::ios::failbit);
  return f;
}

std::string stem(const std::string& path) {
  const auto dot = path.rfind('.');
  const auto slash = path.find_last_of("/\\");
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
  return path.substr(0, dot);
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto f = open_output(path);
  f << j.dump(2) << '\n';
}

void write_trace(std::span<const TracePoint> trace, const std::string& path) {
  auto f = open_output(path);
  write_trace_csv(trace, f);
}

nlohmann::json report_json(const RunReport& report, const Resolved& r) {
  nlohmann::json j = to_json(report);
  j["config"] = config_to_json(r.config);
  j["build_id"] = build_id();
  return j;
}

}  // namespace

int cmd_run(const ExperimentConfig& cfg, std::ostream& out) {
  const Resolved r = resolve(cfg);
  print_plan(r, out);
  require_admissible(r);
  if (cfg.threads > 0 && cfg.delay != "none") {
    out << "warning: delay model ignored by the threaded engine\n";
  }

  const RunReport report = execute(r, cfg.threads, true);
  out << std::setprecision(6) << "k_done         " << report.k_done << '\n'
      << "wall_time_s    " << report.wall_time_s << '\n'
      << "staleness_max  " << report.observed_staleness_max
      << (report.staleness_exceeded ? " (exceeds the configured staleness)" : "") << '\n'
      << "final_f        " << r.problem->eval_mean(report.final_x) << '\n'
      << "ergodic_grad   " << ergodic_mean(report.grad_norm_sq) << '\n';

  if (!cfg.output.empty()) {
    write_json(report_json(report, r), cfg.output);
    const std::string base = stem(cfg.output);
    write_trace(report.grad_norm_sq, base + ".grad_norm_sq.csv");
    write_trace(report.objective, base + ".objective.csv");
    out << "report         " << cfg.output << '\n';
  }
  return kSuccess;
}

int cmd_bench_speedup(const ExperimentConfig& cfg, std::ostream& out) {
  if (std::find(cfg.thread_list.begin(), cfg.thread_list.end(), 1) == cfg.thread_list.end()) {
    throw ValidationError("thread_list must contain 1 (the baseline)");
  }
  for (std::size_t t : cfg.thread_list) {
    if (t == 0) throw ValidationError("thread_list entries must be >= 1");
  }
  const SpeedupMode mode = parse_speedup_mode(cfg.speedup_mode);
  if (mode == SpeedupMode::to_target && !cfg.target_f) {
    throw ValidationError("speedup_mode to_target needs target_f");
  }
  const Resolved r = resolve(cfg);
  print_plan(r, out);
  require_admissible(r);

  std::vector<RunReport> reports;
  for (std::size_t t : cfg.thread_list) {
    reports.push_back(execute(r, t, mode == SpeedupMode::to_target));
    const RunReport& rep = reports.back();
    out << std::setprecision(6) << "threads " << t << ": k_done " << rep.k_done << ", wall "
        << rep.wall_time_s << " s, staleness_max " << rep.observed_staleness_max << '\n';
  }
  const SpeedupTable table = speedup(reports, mode, cfg.target_f);
  out << '\n' << format_speedup_table(table);
  if (!cfg.output.empty()) {
    auto f = open_output(cfg.output);
    write_speedup_csv(table, f);
    out << "table          " << cfg.output << '\n';
  }
  return kSuccess;
}

int cmd_blend_demo(const ExperimentConfig& cfg, std::ostream& out) {
  if (cfg.variant != "aszd") throw ValidationError("blend-demo runs the aszd variant only");
  ExperimentConfig blend_cfg = cfg;
  blend_cfg.problem.kind = "blend";

  if (cfg.export_csv) {
    if (cfg.problem.data_csv) throw ValidationError("export_csv and data_csv are exclusive");
    const BlendData data =
        synthesize_blend(cfg.problem.rows, cfg.problem.models, cfg.seed,
                         cfg.problem.noise_std.value_or(default_noise_std("blend")));
    auto f = open_output(*cfg.export_csv);
    write_blend_csv(data, f);
    out << "exported       " << *cfg.export_csv << '\n';
  }

  const Resolved r = resolve(blend_cfg);
  const auto& blend = dynamic_cast<const BlendProblem&>(*r.problem);
  for (const auto& w : blend.warnings()) out << "warning: " << w << '\n';
  print_plan(r, out);
  require_admissible(r);

  const RunReport report = execute(r, cfg.threads, true);
  std::vector<TracePoint> train, holdout;
  for (const Snapshot& s : report.snapshots) {
    train.push_back({s.k, blend.train_rmse(s.x)});
    holdout.push_back({s.k, blend.holdout_rmse(s.x)});
  }

  out << "\n" << std::setw(10) << "k" << std::setw(14) << "train_rmse" << std::setw(14)
      << "heldout_rmse" << '\n';
  const std::size_t every = std::max<std::size_t>(1, train.size() / 20);
  for (std::size_t s = 0; s < train.size(); ++s) {
    if (s % every != 0 && s + 1 != train.size()) continue;
    out << std::setw(10) << train[s].k << std::setw(14) << std::setprecision(6) << train[s].value
        << std::setw(14) << holdout[s].value << '\n';
  }
  out << "\nheld-out RMSE at x = 0  " << holdout.front().value << '\n'
      << "final held-out RMSE     " << holdout.back().value << '\n';
  if (!cfg.problem.data_csv) {
    out << "noise floor             "
        << cfg.problem.noise_std.value_or(default_noise_std("blend")) << '\n';
  }

  if (!cfg.output.empty()) {
    nlohmann::json j = report_json(report, r);
    nlohmann::json jt = nlohmann::json::array(), jh = nlohmann::json::array();
    for (const auto& p : train) jt.push_back({p.k, p.value});
    for (const auto& p : holdout) jh.push_back({p.k, p.value});
    j["train_rmse"] = std::move(jt);
    j["heldout_rmse"] = std::move(jh);
    write_json(j, cfg.output);
    const std::string base = stem(cfg.output);
    write_trace(train, base + ".train_rmse.csv");
    write_trace(holdout, base + ".heldout_rmse.csv");
    out << "report                  " << cfg.output << '\n';
  }
  return kSuccess;
}

int cmd_verify_bounds(const ExperimentConfig& cfg, double gamma_scale, std::ostream& out) {
  if (!(gamma_scale > 0.0)) throw ValidationError("gamma scale must be > 0");
  const Resolved r = resolve(cfg);
  print_plan(r, out);

  std::vector<CheckResult> results = check_smoothing_bounds({});
  results.push_back(check_step_size_theory(1000, cfg.seed));
  results.push_back(check_plan_admissible(r.plan, gamma_scale));
  results.push_back(check_floor_admissible(r.plan, gamma_scale));
  results.push_back(check_convergence(*r.problem, r.plan, cfg.k, cfg.seed));

  bool all = true;
  out << '\n';
  for (const CheckResult& c : results) {
    out << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
    all = all && c.passed;
  }
  return all ? kSuccess : kPropertyFailure;
}

}  // namespace asynczoo::cli
