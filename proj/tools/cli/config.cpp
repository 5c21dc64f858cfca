#include "config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "asynczoo/error.hpp"
#include "asynczoo/problems.hpp"

namespace asynczoo::cli {

namespace {

using nlohmann::json;

[[noreturn]] void bad_type(const std::string& key, const char* expected) {
  throw ValidationError("config key '" + key + "' must be " + expected);
}

std::uint64_t read_unsigned(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) bad_type(key, "a non-negative integer");
  return v.get<std::uint64_t>();
}

double read_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad_type(key, "a number");
  return v.get<double>();
}

std::string read_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad_type(key, "a string");
  return v.get<std::string>();
}

bool read_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad_type(key, "a boolean");
  return v.get<bool>();
}

std::vector<std::size_t> read_unsigned_list(const json& v, const std::string& key) {
  if (!v.is_array()) bad_type(key, "a list of non-negative integers");
  std::vector<std::size_t> out;
  for (const json& e : v) out.push_back(static_cast<std::size_t>(read_unsigned(e, key)));
  return out;
}

using Handlers = std::map<std::string, std::function<void(const json&, const std::string&)>>;

void dispatch(const json& j, const Handlers& handlers, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    const auto it = handlers.find(key);
    if (it == handlers.end()) throw ValidationError("unknown config key '" + where + key + "'");
    it->second(value, where + key);
  }
}

template <class T, class Read>
auto optional_of(std::optional<T>& slot, Read read) {
  return [&slot, read](const json& v, const std::string& key) {
    if (v.is_null()) {
      slot.reset();
    } else {
      slot = static_cast<T>(read(v, key));
    }
  };
}

ProblemSpec problem_from_json(const json& j) {
  ProblemSpec p;
  const Handlers handlers{
      {"kind", [&](const json& v, const std::string& k) { p.kind = read_string(v, k); }},
      {"n", [&](const json& v, const std::string& k) { p.n = read_unsigned(v, k); }},
      {"condition", [&](const json& v, const std::string& k) { p.condition = read_number(v, k); }},
      {"components", [&](const json& v, const std::string& k) { p.components = read_unsigned(v, k); }},
      {"center_spread",
       [&](const json& v, const std::string& k) { p.center_spread = read_number(v, k); }},
      {"rows", [&](const json& v, const std::string& k) { p.rows = read_unsigned(v, k); }},
      {"models", [&](const json& v, const std::string& k) { p.models = read_unsigned(v, k); }},
      {"data_csv", optional_of(p.data_csv, read_string)},
      {"noise_std", optional_of(p.noise_std, read_number)},
      {"layers", [&](const json& v, const std::string& k) { p.layers = read_unsigned_list(v, k); }},
      {"samples", [&](const json& v, const std::string& k) { p.samples = read_unsigned(v, k); }},
  };
  dispatch(j, handlers, "problem.");
  return p;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  const Handlers handlers{
      {"variant", [&](const json& v, const std::string& k) { c.variant = read_string(v, k); }},
      {"problem", [&](const json& v, const std::string&) { c.problem = problem_from_json(v); }},
      {"k", [&](const json& v, const std::string& k) { c.k = read_unsigned(v, k); }},
      {"threads", [&](const json& v, const std::string& k) { c.threads = read_unsigned(v, k); }},
      {"staleness", [&](const json& v, const std::string& k) { c.staleness = read_unsigned(v, k); }},
      {"delay", [&](const json& v, const std::string& k) { c.delay = read_string(v, k); }},
      {"seed", [&](const json& v, const std::string& k) { c.seed = read_unsigned(v, k); }},
      {"mu", optional_of(c.mu, read_number)},
      {"gamma", optional_of(c.gamma, read_number)},
      {"sigma2", optional_of(c.sigma2, read_number)},
      {"block", optional_of(c.block, read_unsigned)},
      {"sigma2_samples",
       [&](const json& v, const std::string& k) { c.sigma2_samples = read_unsigned(v, k); }},
      {"snapshot_stride",
       [&](const json& v, const std::string& k) { c.snapshot_stride = read_unsigned(v, k); }},
      {"output", [&](const json& v, const std::string& k) { c.output = read_string(v, k); }},
      {"force", [&](const json& v, const std::string& k) { c.force = read_bool(v, k); }},
      {"thread_list",
       [&](const json& v, const std::string& k) { c.thread_list = read_unsigned_list(v, k); }},
      {"speedup_mode",
       [&](const json& v, const std::string& k) { c.speedup_mode = read_string(v, k); }},
      {"target_f", optional_of(c.target_f, read_number)},
      {"export_csv", optional_of(c.export_csv, read_string)},
  };
  dispatch(j, handlers, "");
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json problem{
      {"kind", c.problem.kind},
      {"n", c.problem.n},
      {"condition", c.problem.condition},
      {"components", c.problem.components},
      {"center_spread", c.problem.center_spread},
      {"rows", c.problem.rows},
      {"models", c.problem.models},
      {"layers", c.problem.layers},
      {"samples", c.problem.samples},
  };
  if (c.problem.data_csv) problem["data_csv"] = *c.problem.data_csv;
  if (c.problem.noise_std) problem["noise_std"] = *c.problem.noise_std;

  json j{
      {"variant", c.variant},
      {"problem", std::move(problem)},
      {"k", c.k},
      {"threads", c.threads},
      {"staleness", c.staleness},
      {"delay", c.delay},
      {"seed", c.seed},
      {"sigma2_samples", c.sigma2_samples},
      {"snapshot_stride", c.snapshot_stride},
      {"output", c.output},
      {"force", c.force},
      {"thread_list", c.thread_list},
      {"speedup_mode", c.speedup_mode},
  };
  if (c.mu) j["mu"] = *c.mu;
  if (c.gamma) j["gamma"] = *c.gamma;
  if (c.sigma2) j["sigma2"] = *c.sigma2;
  if (c.block) j["block"] = *c.block;
  if (c.target_f) j["target_f"] = *c.target_f;
  if (c.export_csv) j["export_csv"] = *c.export_csv;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigIoError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

double default_noise_std(const std::string& kind) { return kind == "blend" ? 0.5 : 0.1; }

ProblemPtr build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  const double noise = spec.noise_std.value_or(default_noise_std(spec.kind));
  if (spec.kind == "quadratic") {
    QuadraticOptions options;
    options.center_spread = spec.center_spread;
    return make_quadratic(spec.n, seed, spec.condition, spec.components, options);
  }
  if (spec.kind == "blend") {
    if (spec.data_csv) {
      std::ifstream in(*spec.data_csv);
      if (!in) throw ConfigIoError("cannot open blend data '" + *spec.data_csv + "'");
      auto [train, holdout] = split_blend(read_blend_csv(in), seed);
      return std::make_shared<const BlendProblem>(std::move(train), std::move(holdout));
    }
    return make_blend(spec.rows, spec.models, seed, noise);
  }
  if (spec.kind == "blackbox") {
    return make_noisy_blackbox(spec.layers, spec.samples, seed, noise);
  }
  throw ValidationError("unknown problem kind '" + spec.kind +
                        "' (expected quadratic, blend or blackbox)");
}

}  // namespace asynczoo::cli
