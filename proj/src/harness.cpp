#include "sumdens/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "sumdens/bayes.hpp"
#include "sumdens/error.hpp"
#include "sumdens/estimators.hpp"
#include "sumdens/replicates.hpp"
#include "sumdens/stats.hpp"

#ifndef SUMDENS_VERSION
#define SUMDENS_VERSION "unknown"
#endif

namespace sumdens {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Pre-pass rows are simulated in chunks so memory stays bounded for large n.
constexpr std::int64_t kPrepassChunk = 1 << 16;
constexpr std::uint64_t kPrepassSeedMix = 0x9E3779B97F4A7C15ull;

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

bool is_ext(Method m) { return m == Method::ExtCond || m == Method::AkExt; }

std::vector<double> spaced(double lo, double hi, int points, bool log_scale) {
  std::vector<double> out(points);
  for (int g = 0; g < points; ++g) {
    const double t = static_cast<double>(g) / (points - 1);
    out[g] = log_scale ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                       : lo + t * (hi - lo);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

json grid_json(const std::vector<double>& grid) {
  json g = json::array();
  for (double s : grid) g.push_back(s);
  return g;
}

}  // namespace

std::string to_string(ExperimentName name) {
  switch (name) {
    case ExperimentName::ClaytonWeibull: return "clayton_weibull";
    case ExperimentName::GumbelExponential: return "gumbel_exponential";
    case ExperimentName::FrankLognormal: return "frank_lognormal";
    case ExperimentName::GaussLognormal: return "gauss_lognormal";
    case ExperimentName::BayesPima: return "bayes_pima";
    case ExperimentName::Custom: return "custom";
  }
  return "custom";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Sensitivity: return "sensitivity";
    case Method::Cond: return "cond";
    case Method::ExtCond: return "ext_cond";
    case Method::Ak: return "ak";
    case Method::AkExt: return "ak_ext";
    case Method::GaussSeq: return "gauss_seq";
  }
  return "sensitivity";
}

ExperimentName parse_experiment(const std::string& text) {
  for (auto n : {ExperimentName::ClaytonWeibull, ExperimentName::GumbelExponential,
                 ExperimentName::FrankLognormal, ExperimentName::GaussLognormal,
                 ExperimentName::BayesPima, ExperimentName::Custom})
    if (to_string(n) == text) return n;
  throw_invalid("unknown experiment '" + text + "'");
}

Method parse_method(const std::string& text) {
  for (auto m : {Method::Sensitivity, Method::Cond, Method::ExtCond, Method::Ak, Method::AkExt,
                 Method::GaussSeq})
    if (to_string(m) == text) return m;
  throw_invalid("unknown method '" + text + "'");
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw_invalid("method list is empty");
  return out;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw_invalid("unknown output format '" + text + "' (expected csv or json)");
}

ExperimentConfig default_config(ExperimentName name) {
  ExperimentConfig cfg;
  cfg.name = name;
  switch (name) {
    case ExperimentName::ClaytonWeibull:
      cfg.n = 10;
      cfg.copula = "clayton";
      cfg.theta = 0.2;
      cfg.marginals = {"weibull:0.3,1"};
      cfg.methods = {Method::Sensitivity, Method::ExtCond, Method::AkExt};
      cfg.grid.spacing = GridSpacing::Log;
      break;
    case ExperimentName::GumbelExponential:
      cfg.n = 15;
      cfg.copula = "gumbel";
      cfg.theta = 5.0;
      cfg.marginals = {"exp:1"};
      cfg.methods = {Method::Sensitivity, Method::ExtCond, Method::AkExt};
      cfg.grid.spacing = GridSpacing::Linear;
      break;
    case ExperimentName::FrankLognormal:
      cfg.n = 10;
      cfg.copula = "frank";
      cfg.theta = 1e-3;
      cfg.marginals = {};  // Lognormal(i - 10, sqrt(i)), filled by build_model
      cfg.methods = {Method::Sensitivity, Method::Cond, Method::Ak};
      cfg.grid.spacing = GridSpacing::Log;
      break;
    case ExperimentName::GaussLognormal:
      cfg.n = 32;
      cfg.copula = "gaussian";
      cfg.rho = 0.5;
      cfg.marginals = {"lognormal:0,1"};
      cfg.methods = {Method::GaussSeq};
      cfg.grid.spacing = GridSpacing::Log;
      break;
    case ExperimentName::BayesPima:
      throw_invalid("bayes_pima is run through the bayes pipeline, not run_experiment");
    case ExperimentName::Custom:
      cfg.n = 5;
      cfg.copula = "independence";
      cfg.marginals = {"exp:1"};
      cfg.methods = {Method::Sensitivity, Method::Cond, Method::Ak};
      cfg.grid.spacing = GridSpacing::Linear;
      break;
  }
  return cfg;
}

JointModel build_model(const ExperimentConfig& cfg) {
  if (cfg.n < 1) throw_invalid("dimension n must be at least 1");
  std::vector<Marginal> marginals;
  if (cfg.name == ExperimentName::FrankLognormal && cfg.marginals.empty()) {
    for (int i = 1; i <= cfg.n; ++i)
      marginals.push_back(Marginal::lognormal(i - 10.0, std::sqrt(static_cast<double>(i))));
  } else if (cfg.marginals.size() == 1) {
    marginals.assign(cfg.n, Marginal::parse(cfg.marginals.front()));
  } else if (static_cast<int>(cfg.marginals.size()) == cfg.n) {
    for (const auto& m : cfg.marginals) marginals.push_back(Marginal::parse(m));
  } else {
    throw_invalid("give one marginal spec or exactly n of them");
  }

  Copula copula = Independence{};
  if (cfg.copula == "independence") {
  } else if (cfg.copula == "clayton") {
    copula = ArchimedeanFamily::clayton(cfg.theta);
  } else if (cfg.copula == "gumbel") {
    copula = ArchimedeanFamily::gumbel(cfg.theta);
  } else if (cfg.copula == "frank") {
    copula = ArchimedeanFamily::frank(cfg.theta);
  } else if (cfg.copula == "gaussian") {
    // rho = 0 is the independence control; running it as independence also
    // lets the conditional estimators take part.
    if (cfg.rho != 0.0) copula = GaussianCopula::equicorrelated(cfg.n, cfg.rho);
  } else {
    throw_invalid("unknown copula '" + cfg.copula + "'");
  }
  return JointModel(std::move(copula), std::move(marginals));
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.R < 100) throw_invalid("R must be at least 100");
  if (cfg.grid.values.empty() && cfg.grid.points < 2)
    throw_invalid("grid needs at least two points");
  if (!(cfg.pilot_frac >= 0.0 && cfg.pilot_frac < 1.0))
    throw_invalid("pilot fraction must lie in [0,1)");
  if (cfg.methods.empty()) throw_invalid("no methods selected");
  if (cfg.workers < 1) throw_invalid("workers must be at least 1");
  const JointModel model = build_model(cfg);
  for (Method m : cfg.methods) {
    const std::string name = to_string(m);
    if (is_ext(m)) {
      const auto* fam = model.archimedean();
      if (!fam)
        throw_capability(name + " needs a frailty (Archimedean) copula");
      if (fam->kind() == ArchimedeanKind::Frank)
        throw_capability(name + " is not offered for the Frank copula");
    }
    if ((m == Method::Cond || m == Method::Ak) && model.gaussian())
      throw_capability(name + " is not available for the Gaussian copula");
    if (m == Method::GaussSeq) {
      if (!model.gaussian() && !model.independent())
        throw_capability("gauss_seq needs a Gaussian or independence copula");
      if (!model.all_positive()) throw_invalid("gauss_seq needs positive marginals");
    }
  }
}

std::vector<double> resolve_grid(const ExperimentConfig& cfg, const JointModel& model) {
  if (!cfg.grid.values.empty()) {
    for (double s : cfg.grid.values)
      if (!std::isfinite(s)) throw_invalid("grid values must be finite");
    return cfg.grid.values;
  }
  const int points = cfg.grid.points;
  if (points < 2) throw_invalid("grid needs at least two points");
  double lo = cfg.grid.min.value_or(kNaN);
  double hi = cfg.grid.max.value_or(kNaN);
  if (!cfg.grid.min || !cfg.grid.max) {
    if (cfg.prepass < 2) throw_invalid("pre-pass needs at least two draws");
    std::vector<double> sums;
    sums.reserve(static_cast<std::size_t>(cfg.prepass));
    for (std::int64_t done = 0, chunk = 0; done < cfg.prepass; done += kPrepassChunk, ++chunk) {
      const auto count = std::min(kPrepassChunk, cfg.prepass - done);
      const auto reps =
          simulate_replicates(model, count, (cfg.seed ^ kPrepassSeedMix) + chunk, cfg.workers);
      for (std::int64_t r = 0; r < count; ++r) {
        double s = 0.0;
        for (double v : reps.row(r)) s += v;
        sums.push_back(s);
      }
    }
    std::sort(sums.begin(), sums.end());
    if (!cfg.grid.min) lo = sorted_quantile(sums, 0.005);
    if (!cfg.grid.max) hi = sorted_quantile(sums, 0.995);
  }
  if (!(hi > lo)) throw_invalid("grid maximum must exceed the minimum");
  bool log_scale = cfg.grid.spacing == GridSpacing::Log;
  if (log_scale && !(lo > 0.0)) {
    if (cfg.grid.min) throw_invalid("log-spaced grids need a positive minimum");
    log_scale = false;
  }
  return spaced(lo, hi, points, log_scale);
}

double sqrt_wnrv(double cpu_seconds, double variance, std::int64_t r, double estimate) {
  if (r <= 0) throw_invalid("replicate count must be positive");
  if (estimate == 0.0 || !std::isfinite(estimate)) return kNaN;
  return std::sqrt(cpu_seconds * variance / (static_cast<double>(r) * estimate * estimate));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const JointModel model = build_model(cfg);
  const auto grid = resolve_grid(cfg, model);

  ExperimentResult result;
  auto& meta = result.metadata;
  meta["experiment"] = to_string(cfg.name);
  meta["version"] = version();
  meta["seed"] = cfg.seed;
  meta["n"] = cfg.n;
  meta["R"] = cfg.R;
  meta["pilot_frac"] = cfg.pilot_frac;
  meta["workers"] = cfg.workers;
  meta["copula"] = cfg.copula;
  if (model.archimedean()) meta["theta"] = cfg.theta;
  if (cfg.copula == "gaussian") meta["rho"] = cfg.rho;
  json margs = json::array();
  for (const auto& m : model.marginals()) margs.push_back(m.describe());
  meta["marginals"] = margs;
  meta["grid"] = grid_json(grid);

  const bool need_reps =
      std::any_of(cfg.methods.begin(), cfg.methods.end(), [](Method m) { return m != Method::GaussSeq; });
  ReplicateSet reps;
  std::string reps_hash;
  if (need_reps) {
    const auto t0 = Clock::now();
    reps = simulate_replicates(model, cfg.R, cfg.seed, cfg.workers);
    if (cfg.timing) meta["simulation_seconds"] = seconds_since(t0);
    reps_hash = hex64(reps.hash());
    meta["replicate_hash"] = reps_hash;
  }

  std::vector<std::vector<EstimatorOutput>> per_method;
  json methods_meta = json::object();
  for (Method m : cfg.methods) {
    const auto t0 = Clock::now();
    std::vector<EstimatorOutput> out;
    json mm = json::object();
    switch (m) {
      case Method::Sensitivity: {
        const auto in = sensitivity_inputs(reps, model, cfg.workers);
        out = sensitivity_from_inputs(in, grid, cfg.pilot_frac);
        break;
      }
      case Method::Cond: out = estimate_cond(reps, model, grid, cfg.workers); break;
      case Method::ExtCond: out = estimate_ext_cond(reps, model, grid, cfg.workers); break;
      case Method::Ak: out = estimate_ak(reps, model, grid, false, cfg.workers); break;
      case Method::AkExt: out = estimate_ak(reps, model, grid, true, cfg.workers); break;
      case Method::GaussSeq: {
        const auto curve = density_curve(model, grid, cfg.R, cfg.seed, cfg.uniforms, cfg.workers);
        for (const auto& p : curve.points) out.push_back(p.pdf);
        mm["redraws"] = curve.redraws;
        mm["uniforms"] = cfg.uniforms == UniformMode::Common ? "common" : "independent";
        break;
      }
    }
    const double secs = seconds_since(t0);
    for (auto& o : out) o.cpu_seconds = secs;
    if (cfg.timing) mm["cpu_seconds"] = secs;
    mm["r_used"] = out.empty() ? 0 : out.front().r_used;
    if (m != Method::GaussSeq) mm["replicate_hash"] = reps_hash;
    methods_meta[to_string(m)] = mm;
    per_method.push_back(std::move(out));
  }
  meta["methods"] = methods_meta;

  for (std::size_t g = 0; g < grid.size(); ++g) {
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
      const auto& o = per_method[k][g];
      const double var = o.std_error * o.std_error * static_cast<double>(o.r_used);
      const double w = cfg.timing ? sqrt_wnrv(o.cpu_seconds, var, o.r_used, o.estimate) : kNaN;
      result.rows.push_back({grid[g], to_string(cfg.methods[k]), o.estimate, o.std_error, w});
    }
  }
  return result;
}

ExperimentResult run_bayes(const BayesConfig& cfg) {
  if (cfg.grid_points < 2) throw_invalid("grid needs at least two points");
  if (cfg.benchmark_steps < cfg.benchmark_thin * 2)
    throw_invalid("benchmark chain is too short for its thinning");
  const LogisticModel model = load_pima(cfg.data_path);
  const int coord = model.coefficient_index(cfg.coefficient);
  const LogTarget target = logistic_target(model);
  const std::vector<double> init(model.dim(), 0.0);

  ExperimentResult result;
  auto& meta = result.metadata;
  meta["experiment"] = "bayes_pima";
  meta["version"] = version();
  meta["seed"] = cfg.seed;
  meta["coefficient"] = cfg.coefficient;
  meta["rows"] = model.design.rows();
  meta["dim"] = model.dim();
  meta["step_var"] = cfg.step_var;
  meta["burn_in"] = cfg.burn_in;
  meta["keep"] = cfg.keep;

  auto t0 = Clock::now();
  const Chain chain = rw_metropolis(target, init, cfg.step_var, cfg.burn_in, cfg.keep, cfg.seed);
  if (cfg.timing) meta["chain_seconds"] = seconds_since(t0);
  meta["acceptance_rate"] = chain.acceptance_rate;

  const auto xs = chain.coordinate(coord);
  const double mean = sample_mean(xs);
  const double sd = std::sqrt(sample_variance(xs));
  std::vector<double> grid = spaced(mean - 4.0 * sd, mean + 4.0 * sd, cfg.grid_points, false);
  const double shift = cfg.shift.value_or(default_shift(grid));
  meta["shift"] = shift;
  meta["grid"] = grid_json(grid);

  t0 = Clock::now();
  const auto sens =
      marginal_posterior_density(chain, coord, grid, shift, cfg.pilot_frac, cfg.batches);
  const double sens_secs = seconds_since(t0);
  const auto kde_main = kde(xs, grid);

  t0 = Clock::now();
  const Chain bench = rw_metropolis(target, init, cfg.step_var, cfg.burn_in, cfg.benchmark_steps,
                                    cfg.seed + 1, cfg.benchmark_thin);
  if (cfg.timing) meta["benchmark_seconds"] = seconds_since(t0);
  const auto bench_xs = bench.coordinate(coord);
  const auto kde_bench = kde(bench_xs, grid);
  meta["benchmark_steps"] = cfg.benchmark_steps;
  meta["benchmark_thin"] = cfg.benchmark_thin;
  meta["benchmark_samples"] = bench.steps();
  meta["benchmark_acceptance_rate"] = bench.acceptance_rate;

  const auto mode = static_cast<std::size_t>(
      std::max_element(kde_bench.begin(), kde_bench.end()) - kde_bench.begin());
  json at_mode = json::object();
  at_mode["s"] = grid[mode];
  at_mode["sensitivity"] = sens[mode].estimate;
  at_mode["std_error"] = sens[mode].std_error;
  at_mode["kde"] = kde_main[mode];
  at_mode["kde_benchmark"] = kde_bench[mode];
  meta["posterior_mode"] = at_mode;

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto& o = sens[g];
    const double var = o.std_error * o.std_error * static_cast<double>(o.r_used);
    const double w = cfg.timing ? sqrt_wnrv(sens_secs, var, o.r_used, o.estimate) : kNaN;
    result.rows.push_back({grid[g], "sensitivity", o.estimate, o.std_error, w});
    result.rows.push_back({grid[g], "kde", kde_main[g], kNaN, kNaN});
    result.rows.push_back({grid[g], "kde_benchmark", kde_bench[g], kNaN, kNaN});
  }
  return result;
}

std::string to_csv(const ExperimentResult& result) {
  std::string out = "s,method,estimate,std_error,sqrt_wnrv\n";
  for (const auto& r : result.rows) {
    out += format_double(r.s);
    out += ',';
    out += r.method;
    out += ',';
    out += format_double(r.estimate);
    out += ',';
    out += format_double(r.std_error);
    out += ',';
    out += format_double(r.sqrt_wnrv);
    out += '\n';
  }
  return out;
}

// Numbers are written as strings with 17 significant digits so NaN survives
// and the round trip is exact.
std::string to_json(const ExperimentResult& result) {
  json doc = json::object();
  doc["columns"] = {"s", "method", "estimate", "std_error", "sqrt_wnrv"};
  json rows = json::array();
  for (const auto& r : result.rows)
    rows.push_back({{"s", format_double(r.s)},
                    {"method", r.method},
                    {"estimate", format_double(r.estimate)},
                    {"std_error", format_double(r.std_error)},
                    {"sqrt_wnrv", format_double(r.sqrt_wnrv)}});
  doc["rows"] = rows;
  doc["metadata"] = result.metadata;
  return doc.dump(2) + "\n";
}

ExperimentResult from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw_io(std::string("malformed result JSON: ") + e.what());
  }
  ExperimentResult result;
  try {
    for (const auto& r : doc.at("rows"))
      result.rows.push_back({parse_double(r.at("s").get<std::string>()),
                             r.at("method").get<std::string>(),
                             parse_double(r.at("estimate").get<std::string>()),
                             parse_double(r.at("std_error").get<std::string>()),
                             parse_double(r.at("sqrt_wnrv").get<std::string>())});
    if (doc.contains("metadata")) result.metadata = doc.at("metadata");
  } catch (const std::exception& e) {
    throw_io(std::string("result JSON has an unexpected shape: ") + e.what());
  }
  return result;
}

void emit(const ExperimentResult& result, const std::string& path, OutputFormat format) {
  if (result.rows.empty()) throw_invalid("nothing to write: the result table is empty");
  const std::string body = format == OutputFormat::Csv ? to_csv(result) : to_json(result);
  if (path == "-") {
    std::cout << body;
    std::cout.flush();
    if (!std::cout) throw_io("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot open '" + path + "' for writing");
  out << body;
  out.close();
  if (!out) throw_io("failed writing '" + path + "'");
}

const char* version() { return SUMDENS_VERSION; }

}  // namespace sumdens
