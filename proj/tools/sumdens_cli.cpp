// Command-line front end. Talks to the library only through the C API.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sumdens/sumdens.h"

namespace {

// Exit codes: 0 success, 2 bad usage or configuration, 3 I/O failure,
// 1 anything else.
int exit_code(sd_status st) {
  switch (st) {
    case SD_OK: return 0;
    case SD_ERR_INVALID_ARGUMENT:
    case SD_ERR_CAPABILITY: return 2;
    case SD_ERR_IO: return 3;
    default: return 1;
  }
}

struct Failure {
  sd_status status;
};

void check(sd_status st) {
  if (st != SD_OK) throw Failure{st};
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("SUMDENS_SEED");
  if (!v || !*v) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto seed = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return seed;
  } catch (const std::exception&) {
    std::cerr << "sumdens: ignoring SUMDENS_SEED='" << v << "' (not an unsigned integer)\n";
    return std::nullopt;
  }
}

std::string join(const std::vector<std::string>& items, char sep) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out;
}

struct RunOptions {
  std::string name;
  std::optional<int> n;
  std::optional<std::int64_t> R;
  std::optional<std::uint64_t> seed;
  std::optional<double> grid_min, grid_max, pilot_frac, rho, theta;
  std::optional<int> grid_points;
  std::vector<double> grid_values;
  std::string grid_spacing;
  std::string methods;
  std::string copula;
  std::vector<std::string> marginals;
  std::optional<std::int64_t> prepass;
  std::string uniforms;
  std::string out = "-";
  std::string format = "csv";
  int workers = 1;
  std::string timing = "on";
};

struct BayesOptions {
  std::string data = "data/pima.csv";
  std::optional<std::int64_t> steps, burn_in, benchmark_steps, thin;
  std::optional<double> step_var, shift;
  std::optional<int> grid_points;
  std::optional<std::uint64_t> seed;
  std::string coef = "bmi";
  std::string out = "-";
  std::string format = "csv";
  bool full = false;
  std::string timing = "on";
};

void run_experiment_cmd(const RunOptions& o) {
  sd_config* cfg = nullptr;
  check(sd_config_create(o.name.c_str(), &cfg));
  sd_result* res = nullptr;
  try {
    if (o.n) check(sd_config_set_int(cfg, "n", *o.n));
    if (o.R) check(sd_config_set_int(cfg, "R", *o.R));
    const auto seed = o.seed ? o.seed : env_seed();
    if (seed) check(sd_config_set_int(cfg, "seed", static_cast<std::int64_t>(*seed)));
    if (o.grid_min) check(sd_config_set_double(cfg, "grid_min", *o.grid_min));
    if (o.grid_max) check(sd_config_set_double(cfg, "grid_max", *o.grid_max));
    if (o.grid_points) check(sd_config_set_int(cfg, "grid_points", *o.grid_points));
    if (!o.grid_values.empty()) {
      std::ostringstream os;
      os.precision(17);
      for (std::size_t i = 0; i < o.grid_values.size(); ++i)
        os << (i ? "," : "") << o.grid_values[i];
      check(sd_config_set_string(cfg, "grid_values", os.str().c_str()));
    }
    if (!o.grid_spacing.empty()) check(sd_config_set_string(cfg, "spacing", o.grid_spacing.c_str()));
    if (o.pilot_frac) check(sd_config_set_double(cfg, "pilot_frac", *o.pilot_frac));
    if (o.rho) check(sd_config_set_double(cfg, "rho", *o.rho));
    if (o.theta) check(sd_config_set_double(cfg, "theta", *o.theta));
    if (!o.copula.empty()) check(sd_config_set_string(cfg, "copula", o.copula.c_str()));
    if (!o.marginals.empty())
      check(sd_config_set_string(cfg, "marginals", join(o.marginals, ';').c_str()));
    if (!o.methods.empty()) check(sd_config_set_string(cfg, "methods", o.methods.c_str()));
    if (o.prepass) check(sd_config_set_int(cfg, "prepass", *o.prepass));
    if (!o.uniforms.empty()) check(sd_config_set_string(cfg, "uniforms", o.uniforms.c_str()));
    check(sd_config_set_int(cfg, "workers", o.workers));
    check(sd_config_set_int(cfg, "timing", o.timing == "on" ? 1 : 0));
    check(sd_run_experiment(cfg, &res));
    check(sd_result_write(res, o.out.c_str(), o.format.c_str()));
  } catch (...) {
    sd_result_destroy(res);
    sd_config_destroy(cfg);
    throw;
  }
  sd_result_destroy(res);
  sd_config_destroy(cfg);
}

void run_bayes_cmd(const BayesOptions& o) {
  sd_bayes_config* cfg = nullptr;
  check(sd_bayes_config_create(&cfg));
  sd_result* res = nullptr;
  try {
    check(sd_bayes_config_set_string(cfg, "data", o.data.c_str()));
    check(sd_bayes_config_set_string(cfg, "coef", o.coef.c_str()));
    if (o.steps) check(sd_bayes_config_set_int(cfg, "keep", *o.steps));
    if (o.burn_in) check(sd_bayes_config_set_int(cfg, "burn_in", *o.burn_in));
    if (o.full) check(sd_bayes_config_set_int(cfg, "full", 1));
    if (o.benchmark_steps) check(sd_bayes_config_set_int(cfg, "benchmark_steps", *o.benchmark_steps));
    if (o.thin) check(sd_bayes_config_set_int(cfg, "benchmark_thin", *o.thin));
    if (o.step_var) check(sd_bayes_config_set_double(cfg, "step_var", *o.step_var));
    if (o.shift) check(sd_bayes_config_set_double(cfg, "shift", *o.shift));
    if (o.grid_points) check(sd_bayes_config_set_int(cfg, "grid_points", *o.grid_points));
    const auto seed = o.seed ? o.seed : env_seed();
    if (seed) check(sd_bayes_config_set_int(cfg, "seed", static_cast<std::int64_t>(*seed)));
    check(sd_bayes_config_set_int(cfg, "timing", o.timing == "on" ? 1 : 0));
    check(sd_run_bayes(cfg, &res));
    check(sd_result_write(res, o.out.c_str(), o.format.c_str()));
    std::cerr << "metadata: " << sd_result_metadata(res) << "\n";
  } catch (...) {
    sd_result_destroy(res);
    sd_bayes_config_destroy(cfg);
    throw;
  }
  sd_result_destroy(res);
  sd_bayes_config_destroy(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo density estimators for sums of dependent random variables"};
  app.set_version_flag("--version", std::string(sd_version()));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run a named experiment");
  run_cmd->add_option("name", run.name,
                      "clayton_weibull | gumbel_exponential | frank_lognormal | gauss_lognormal | custom")
      ->required();
  run_cmd->add_option("--n", run.n, "dimension");
  run_cmd->add_option("--R", run.R, "replicates");
  run_cmd->add_option("--seed", run.seed, "seed (default: SUMDENS_SEED or 1)");
  run_cmd->add_option("--grid-min", run.grid_min);
  run_cmd->add_option("--grid-max", run.grid_max);
  run_cmd->add_option("--grid-points", run.grid_points, "default 50");
  run_cmd->add_option("--grid-values", run.grid_values, "explicit grid")->delimiter(',');
  run_cmd->add_option("--grid-spacing", run.grid_spacing, "auto | linear | log");
  run_cmd->add_option("--pilot-frac", run.pilot_frac, "control-variate pilot fraction");
  run_cmd->add_option("--rho", run.rho, "Gaussian copula correlation");
  run_cmd->add_option("--theta", run.theta, "Archimedean parameter");
  run_cmd->add_option("--copula", run.copula, "custom runs: independence | clayton | gumbel | frank | gaussian");
  run_cmd->add_option("--marginal", run.marginals, "marginal spec, once or n times (e.g. weibull:0.3,1)");
  run_cmd->add_option("--methods", run.methods, "comma list: sensitivity,cond,ext_cond,ak,ak_ext,gauss_seq");
  run_cmd->add_option("--prepass", run.prepass, "draws used to choose the default grid");
  run_cmd->add_option("--uniforms", run.uniforms, "gauss_seq: common | independent");
  run_cmd->add_option("--out", run.out, "output path, - for stdout");
  run_cmd->add_option("--format", run.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--workers", run.workers)->check(CLI::PositiveNumber);
  run_cmd->add_option("--timing", run.timing, "off writes sqrt_wnrv as nan for reproducible output")
      ->check(CLI::IsMember({"on", "off"}));

  BayesOptions bayes;
  auto* bayes_cmd = app.add_subcommand("bayes", "Pima logistic-regression marginal posterior");
  bayes_cmd->add_option("--data", bayes.data, "CSV with npreg,glu,bp,skin,bmi,ped,age,diabetes");
  bayes_cmd->add_option("--steps", bayes.steps, "kept chain steps (default 25000)");
  bayes_cmd->add_option("--burn-in", bayes.burn_in, "default 1000");
  bayes_cmd->add_option("--step-var", bayes.step_var, "random-walk variance (default 7.5e-3)");
  bayes_cmd->add_option("--coef", bayes.coef, "intercept | npreg | glu | bmi | ped | age");
  bayes_cmd->add_option("--benchmark-steps", bayes.benchmark_steps, "benchmark chain length");
  bayes_cmd->add_option("--thin", bayes.thin, "benchmark thinning (default 50)");
  bayes_cmd->add_flag("--full", bayes.full, "full-length benchmark chain (2.5e8 steps)");
  bayes_cmd->add_option("--shift", bayes.shift, "linear shift a");
  bayes_cmd->add_option("--grid-points", bayes.grid_points);
  bayes_cmd->add_option("--seed", bayes.seed);
  bayes_cmd->add_option("--out", bayes.out);
  bayes_cmd->add_option("--format", bayes.format)->check(CLI::IsMember({"csv", "json"}));
  bayes_cmd->add_option("--timing", bayes.timing)->check(CLI::IsMember({"on", "off"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) run_experiment_cmd(run);
    if (*bayes_cmd) run_bayes_cmd(bayes);
  } catch (const Failure& f) {
    std::cerr << "sumdens: " << sd_last_error() << "\n";
    return exit_code(f.status);
  }
  return 0;
}
