#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sumdens/gauss_seq.hpp"
#include "sumdens/joint_model.hpp"

namespace sumdens {

enum class ExperimentName {
  ClaytonWeibull,
  GumbelExponential,
  FrankLognormal,
  GaussLognormal,
  BayesPima,
  Custom,
};

enum class Method { Sensitivity, Cond, ExtCond, Ak, AkExt, GaussSeq };

enum class GridSpacing { Auto, Linear, Log };

enum class OutputFormat { Csv, Json };

std::string to_string(ExperimentName name);
std::string to_string(Method method);
ExperimentName parse_experiment(const std::string& text);
Method parse_method(const std::string& text);
/// Comma-separated list, e.g. "sensitivity,cond".
std::vector<Method> parse_methods(const std::string& text);
OutputFormat parse_format(const std::string& text);

struct GridSpec {
  std::optional<double> min;
  std::optional<double> max;
  int points = 50;
  std::vector<double> values;  // explicit grid; overrides the rest
  GridSpacing spacing = GridSpacing::Auto;
};

struct ExperimentConfig {
  ExperimentName name = ExperimentName::Custom;
  int n = 5;
  std::int64_t R = 100000;
  std::uint64_t seed = 1;
  GridSpec grid;
  double pilot_frac = 0.05;
  std::vector<Method> methods;
  // Copula parameters. `copula` is used by custom runs only: independence,
  // clayton, gumbel, frank or gaussian.
  std::string copula = "independence";
  double theta = 1.0;
  double rho = 0.5;
  // Marginal specs (see Marginal::parse); one entry is repeated n times.
  std::vector<std::string> marginals = {"exp:1"};
  std::int64_t prepass = 1000000;
  UniformMode uniforms = UniformMode::Common;
  int workers = 1;
  bool timing = true;  // false writes sqrt_wnrv as nan so output is reproducible
};

/// Defaults for a named experiment (the figure configurations).
ExperimentConfig default_config(ExperimentName name);

/// Builds the joint model described by a config.
JointModel build_model(const ExperimentConfig& cfg);

/// Checks that every method can run on the config's copula. Throws
/// InvalidArgument or Capability errors.
void validate(const ExperimentConfig& cfg);

/// Grid from the GridSpec settings, or from quantiles of a pre-pass sample
/// of S when the range is not given.
std::vector<double> resolve_grid(const ExperimentConfig& cfg, const JointModel& model);

/// sqrt(cpu * variance / (r * estimate^2)); NaN when estimate = 0.
double sqrt_wnrv(double cpu_seconds, double variance, std::int64_t r, double estimate);

struct EstimateRow {
  double s;
  std::string method;
  double estimate;
  double std_error;
  double sqrt_wnrv;
};

struct ExperimentResult {
  std::vector<EstimateRow> rows;
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct BayesConfig {
  std::string data_path = "data/pima.csv";
  std::string coefficient = "bmi";
  std::int64_t burn_in = 1000;
  std::int64_t keep = 25000;
  double step_var = 7.5e-3;
  std::int64_t benchmark_steps = 500000;
  std::int64_t benchmark_thin = 50;
  std::uint64_t seed = 1;
  int grid_points = 50;
  std::optional<double> shift;  // default: default_shift(grid)
  double pilot_frac = 0.05;
  int batches = 25;
  bool timing = true;
};

/// Benchmark chain length used by --full: 50 x 5e6 steps.
inline constexpr std::int64_t kFullBenchmarkSteps = 250000000;

ExperimentResult run_bayes(const BayesConfig& cfg);

std::string to_csv(const ExperimentResult& result);
std::string to_json(const ExperimentResult& result);
ExperimentResult from_json(const std::string& text);

/// Writes CSV or JSON to `path` ("-" for stdout).
void emit(const ExperimentResult& result, const std::string& path, OutputFormat format);

/// Version string baked in at configure time.
const char* version();

}  // namespace sumdens
