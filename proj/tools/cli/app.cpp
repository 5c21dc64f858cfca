#include <CLI11.hpp>
#include <ostream>

#include "asynczoo/error.hpp"
#include "commands.hpp"

namespace asynczoo::cli {

namespace {

// Flag values; each is applied to the config only when given on the
// command line, so flags override the config file.
struct Flags {
  std::string config_path;
  bool dump_config = false;
  double gamma_scale = 1.0;
  ExperimentConfig v;
  std::string problem_kind;
  double noise_std = 0.0;
  double mu = 0.0, gamma = 0.0, sigma2 = 0.0, target_f = 0.0;
  std::size_t block = 0;
  std::string data_csv, export_csv;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_path, "JSON experiment config");
  sub->add_flag("--dump-config", f.dump_config, "Print the resolved config and exit");
  sub->add_option("--variant", f.v.variant,
                  "generic, ascd, asgd_consistent, asgd_inconsistent or aszd");
  sub->add_option("--problem", f.problem_kind, "quadratic, blend or blackbox");
  sub->add_option("--n", f.v.problem.n, "Quadratic dimension");
  sub->add_option("--condition", f.v.problem.condition, "Quadratic condition number");
  sub->add_option("--components", f.v.problem.components, "Quadratic component count");
  sub->add_option("--center-spread", f.v.problem.center_spread, "Quadratic center spread");
  sub->add_option("--rows", f.v.problem.rows, "Blend rows");
  sub->add_option("--models", f.v.problem.models, "Blend models");
  sub->add_option("--noise", f.noise_std, "Noise standard deviation");
  sub->add_option("--layers", f.v.problem.layers, "Black-box layer widths")->delimiter(',');
  sub->add_option("--samples", f.v.problem.samples, "Black-box sample count");
  sub->add_option("--data-csv", f.data_csv, "Blend data to import (headerless CSV)");
  sub->add_option("--k", f.v.k, "Iterations");
  sub->add_option("--threads", f.v.threads, "Worker threads (0 = simulator)");
  sub->add_option("--staleness", f.v.staleness, "Staleness bound T");
  sub->add_option("--delay", f.v.delay, "Simulator delay model: none, fixed or uniform");
  sub->add_option("--seed", f.v.seed, "Master seed");
  sub->add_option("--mu", f.mu, "Finite-difference step");
  sub->add_option("--gamma", f.gamma, "Step size override");
  sub->add_option("--sigma2", f.sigma2, "Gradient variance (estimated when absent)");
  sub->add_option("--block", f.block, "Coordinates per step (generic variant)");
  sub->add_option("--sigma2-samples", f.v.sigma2_samples, "Draws for the variance estimate");
  sub->add_option("--stride", f.v.snapshot_stride, "Snapshot stride");
  sub->add_option("--output", f.v.output, "Report path");
  sub->add_flag("--force", f.v.force, "Run even if the step size is not admissible");
}

ExperimentConfig merge(const CLI::App* sub, const Flags& f) {
  ExperimentConfig c = f.config_path.empty() ? ExperimentConfig{} : load_config(f.config_path);
  auto given = [sub](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--variant")) c.variant = f.v.variant;
  if (given("--problem")) c.problem.kind = f.problem_kind;
  if (given("--n")) c.problem.n = f.v.problem.n;
  if (given("--condition")) c.problem.condition = f.v.problem.condition;
  if (given("--components")) c.problem.components = f.v.problem.components;
  if (given("--center-spread")) c.problem.center_spread = f.v.problem.center_spread;
  if (given("--rows")) c.problem.rows = f.v.problem.rows;
  if (given("--models")) c.problem.models = f.v.problem.models;
  if (given("--noise")) c.problem.noise_std = f.noise_std;
  if (given("--layers")) c.problem.layers = f.v.problem.layers;
  if (given("--samples")) c.problem.samples = f.v.problem.samples;
  if (given("--data-csv")) c.problem.data_csv = f.data_csv;
  if (given("--k")) c.k = f.v.k;
  if (given("--threads")) c.threads = f.v.threads;
  if (given("--staleness")) c.staleness = f.v.staleness;
  if (given("--delay")) c.delay = f.v.delay;
  if (given("--seed")) c.seed = f.v.seed;
  if (given("--mu")) c.mu = f.mu;
  if (given("--gamma")) c.gamma = f.gamma;
  if (given("--sigma2")) c.sigma2 = f.sigma2;
  if (given("--block")) c.block = f.block;
  if (given("--sigma2-samples")) c.sigma2_samples = f.v.sigma2_samples;
  if (given("--stride")) c.snapshot_stride = f.v.snapshot_stride;
  if (given("--output")) c.output = f.v.output;
  if (given("--force")) c.force = f.v.force;
  if (given("--threads-list")) c.thread_list = f.v.thread_list;
  if (given("--mode")) c.speedup_mode = f.v.speedup_mode;
  if (given("--target")) c.target_f = f.target_f;
  if (given("--export-csv")) c.export_csv = f.export_csv;
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asynchronous stochastic and zeroth-order optimization experiments", "asynczoo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", build_id());

  Flags f;
  auto* run = app.add_subcommand("run", "Run one experiment and write its report");
  auto* bench = app.add_subcommand("bench-speedup", "Measure CCS/RTS over thread counts");
  auto* blend = app.add_subcommand("blend-demo", "Zeroth-order model blending demo");
  auto* verify = app.add_subcommand("verify-bounds", "Check the analytic bounds; PASS/FAIL per check");
  for (auto* sub : {run, bench, blend, verify}) add_common(sub, f);
  bench->add_option("--threads-list", f.v.thread_list, "Thread counts, must include 1")
      ->delimiter(',');
  bench->add_option("--mode", f.v.speedup_mode, "fixed_k or to_target");
  bench->add_option("--target", f.target_f, "Objective target for to_target mode");
  blend->add_option("--export-csv", f.export_csv, "Write the synthesized blend data");
  verify->add_option("--gamma-scale", f.gamma_scale, "Multiply the step size before checking");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  try {
    const ExperimentConfig cfg = merge(sub, f);
    if (f.dump_config) {
      out << config_to_json(cfg).dump(2) << '\n';
      return kSuccess;
    }
    if (sub == run) return cmd_run(cfg, out);
    if (sub == bench) return cmd_bench_speedup(cfg, out);
    if (sub == blend) return cmd_blend_demo(cfg, out);
    return cmd_verify_bounds(cfg, f.gamma_scale, out);
  } catch (const PrerequisiteViolated& e) {
    err << "prerequisite violated: " << e.what() << '\n';
    return kPrerequisiteViolated;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace asynczoo::cli
