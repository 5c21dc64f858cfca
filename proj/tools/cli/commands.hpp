#pragma once

#include <iosfwd>

#include "config.hpp"

namespace asynczoo::cli {

enum ExitCode : int {
  kSuccess = 0,
  kPropertyFailure = 1,
  kPrerequisiteViolated = 2,
  kInputError = 3,
};

int cmd_run(const ExperimentConfig& cfg, std::ostream& out);
int cmd_bench_speedup(const ExperimentConfig& cfg, std::ostream& out);
int cmd_blend_demo(const ExperimentConfig& cfg, std::ostream& out);
/// gamma_scale multiplies the planned step size for the admissibility check.
int cmd_verify_bounds(const ExperimentConfig& cfg, double gamma_scale, std::ostream& out);

/// Parses argv (subcommand + flags) and dispatches; errors go to `err` and
/// are mapped to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* build_id() noexcept;

}  // namespace asynczoo::cli
