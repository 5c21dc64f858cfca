#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "asynczoo/problem.hpp"

namespace asynczoo::cli {

struct ProblemSpec {
  std::string kind = "quadratic";  // quadratic | blend | blackbox
  // quadratic
  std::size_t n = 100;
  double condition = 10.0;
  std::size_t components = 10;
  double center_spread = 1.0;
  // blend
  std::size_t rows = 4000;
  std::size_t models = 50;
  std::optional<std::string> data_csv;  // import instead of synthesizing
  // blend and blackbox; per-kind default when absent
  std::optional<double> noise_std;
  // blackbox
  std::vector<std::size_t> layers{8, 4, 2};
  std::size_t samples = 200;

  bool operator==(const ProblemSpec&) const = default;
};

struct ExperimentConfig {
  std::string variant = "aszd";
  ProblemSpec problem;
  std::uint64_t k = 100000;
  std::size_t threads = 0;  // 0 = deterministic simulator
  std::uint64_t staleness = 0;
  std::string delay = "none";  // simulator only: none | fixed | uniform
  std::uint64_t seed = 0;
  std::optional<double> mu;
  std::optional<double> gamma;
  std::optional<double> sigma2;  // estimated at x0 when absent
  std::optional<std::size_t> block;
  std::size_t sigma2_samples = 200;
  std::uint64_t snapshot_stride = 1000;
  std::string output;  // empty: print only
  bool force = false;
  // bench-speedup
  std::vector<std::size_t> thread_list{1, 2, 4};
  std::string speedup_mode = "fixed_k";
  std::optional<double> target_f;
  // blend-demo
  std::optional<std::string> export_csv;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parse: unknown keys and wrongly typed values throw ValidationError.
/// Missing keys keep their defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Reads a JSON config file; IO failures throw ConfigIoError.
ExperimentConfig load_config(const std::string& path);

struct ConfigIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double default_noise_std(const std::string& kind);

/// Builds the problem described by `spec`, seeded with `seed`.
ProblemPtr build_problem(const ProblemSpec& spec, std::uint64_t seed);

}  // namespace asynczoo::cli
