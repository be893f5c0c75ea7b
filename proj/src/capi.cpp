#include "sumdens/sumdens.h"

#include <cstring>
#include <sstream>
#include <string>

#include "sumdens/error.hpp"
#include "sumdens/harness.hpp"

struct sd_config {
  sumdens::ExperimentConfig cfg;
};

struct sd_bayes_config {
  sumdens::BayesConfig cfg;
};

struct sd_result {
  sumdens::ExperimentResult res;
  std::string metadata;
};

struct sd_model {
  sumdens::JointModel model;
};

namespace {

thread_local std::string g_last_error;

sd_status fail(sd_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
sd_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SD_OK;
  } catch (const sumdens::Error& e) {
    switch (e.code()) {
      case sumdens::ErrorCode::InvalidArgument: return fail(SD_ERR_INVALID_ARGUMENT, e.what());
      case sumdens::ErrorCode::Domain: return fail(SD_ERR_DOMAIN, e.what());
      case sumdens::ErrorCode::Capability: return fail(SD_ERR_CAPABILITY, e.what());
      case sumdens::ErrorCode::Io: return fail(SD_ERR_IO, e.what());
    }
    return fail(SD_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SD_ERR_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) sumdens::throw_invalid(what);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

[[noreturn]] void unknown_key(const std::string& key) {
  sumdens::throw_invalid("unknown configuration key '" + key + "'");
}

int to_int(int64_t v, const char* key) {
  if (v < INT32_MIN || v > INT32_MAX) sumdens::throw_invalid(std::string(key) + " is out of range");
  return static_cast<int>(v);
}

}  // namespace

extern "C" {

const char* sd_last_error(void) { return g_last_error.c_str(); }

const char* sd_version(void) { return sumdens::version(); }

sd_status sd_config_create(const char* experiment, sd_config** out) {
  return guarded([&] {
    require(experiment && out, "null argument");
    *out = nullptr;
    auto cfg = sumdens::default_config(sumdens::parse_experiment(experiment));
    *out = new sd_config{std::move(cfg)};
  });
}

void sd_config_destroy(sd_config* cfg) { delete cfg; }

sd_status sd_config_set_int(sd_config* cfg, const char* key, int64_t value) {
  return guarded([&] {
    require(cfg && key, "null argument");
    auto& c = cfg->cfg;
    const std::string k = key;
    if (k == "n") c.n = to_int(value, key);
    else if (k == "R") c.R = value;
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(value);
    else if (k == "grid_points") c.grid.points = to_int(value, key);
    else if (k == "workers") c.workers = to_int(value, key);
    else if (k == "prepass") c.prepass = value;
    else if (k == "timing") c.timing = value != 0;
    else unknown_key(k);
  });
}

sd_status sd_config_set_double(sd_config* cfg, const char* key, double value) {
  return guarded([&] {
    require(cfg && key, "null argument");
    auto& c = cfg->cfg;
    const std::string k = key;
    if (k == "grid_min") c.grid.min = value;
    else if (k == "grid_max") c.grid.max = value;
    else if (k == "pilot_frac") c.pilot_frac = value;
    else if (k == "rho") c.rho = value;
    else if (k == "theta") c.theta = value;
    else unknown_key(k);
  });
}

sd_status sd_config_set_string(sd_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    auto& c = cfg->cfg;
    const std::string k = key;
    const std::string v = value;
    if (k == "methods") {
      c.methods = sumdens::parse_methods(v);
    } else if (k == "copula") {
      c.copula = v;
    } else if (k == "marginals") {
      c.marginals = split(v, ';');
      require(!c.marginals.empty(), "marginal list is empty");
    } else if (k == "grid_values") {
      c.grid.values.clear();
      for (const auto& item : split(v, ',')) {
        try {
          c.grid.values.push_back(std::stod(item));
        } catch (const std::exception&) {
          sumdens::throw_invalid("grid value '" + item + "' is not a number");
        }
      }
    } else if (k == "spacing") {
      if (v == "auto") c.grid.spacing = sumdens::GridSpacing::Auto;
      else if (v == "linear") c.grid.spacing = sumdens::GridSpacing::Linear;
      else if (v == "log") c.grid.spacing = sumdens::GridSpacing::Log;
      else sumdens::throw_invalid("spacing must be auto, linear or log");
    } else if (k == "uniforms") {
      if (v == "common") c.uniforms = sumdens::UniformMode::Common;
      else if (v == "independent") c.uniforms = sumdens::UniformMode::Independent;
      else sumdens::throw_invalid("uniforms must be common or independent");
    } else {
      unknown_key(k);
    }
  });
}

sd_status sd_bayes_config_create(sd_bayes_config** out) {
  return guarded([&] {
    require(out, "null argument");
    *out = new sd_bayes_config{};
  });
}

void sd_bayes_config_destroy(sd_bayes_config* cfg) { delete cfg; }

sd_status sd_bayes_config_set_int(sd_bayes_config* cfg, const char* key, int64_t value) {
  return guarded([&] {
    require(cfg && key, "null argument");
    auto& c = cfg->cfg;
    const std::string k = key;
    if (k == "burn_in") c.burn_in = value;
    else if (k == "keep") c.keep = value;
    else if (k == "benchmark_steps") c.benchmark_steps = value;
    else if (k == "benchmark_thin") c.benchmark_thin = value;
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(value);
    else if (k == "grid_points") c.grid_points = to_int(value, key);
    else if (k == "batches") c.batches = to_int(value, key);
    else if (k == "timing") c.timing = value != 0;
    else if (k == "full") c.benchmark_steps = value ? sumdens::kFullBenchmarkSteps : c.benchmark_steps;
    else unknown_key(k);
  });
}

sd_status sd_bayes_config_set_double(sd_bayes_config* cfg, const char* key, double value) {
  return guarded([&] {
    require(cfg && key, "null argument");
    auto& c = cfg->cfg;
    const std::string k = key;
    if (k == "step_var") c.step_var = value;
    else if (k == "shift") c.shift = value;
    else if (k == "pilot_frac") c.pilot_frac = value;
    else unknown_key(k);
  });
}

sd_status sd_bayes_config_set_string(sd_bayes_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    require(cfg && key && value, "null argument");
    const std::string k = key;
    if (k == "data") cfg->cfg.data_path = value;
    else if (k == "coef") cfg->cfg.coefficient = value;
    else unknown_key(k);
  });
}

sd_status sd_run_experiment(const sd_config* cfg, sd_result** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = nullptr;
    auto res = sumdens::run_experiment(cfg->cfg);
    auto meta = res.metadata.dump();
    *out = new sd_result{std::move(res), std::move(meta)};
  });
}

sd_status sd_run_bayes(const sd_bayes_config* cfg, sd_result** out) {
  return guarded([&] {
    require(cfg && out, "null argument");
    *out = nullptr;
    auto res = sumdens::run_bayes(cfg->cfg);
    auto meta = res.metadata.dump();
    *out = new sd_result{std::move(res), std::move(meta)};
  });
}

size_t sd_result_rows(const sd_result* res) { return res ? res->res.rows.size() : 0; }

sd_status sd_result_row(const sd_result* res, size_t index, double* s, const char** method,
                        double* estimate, double* std_error, double* sqrt_wnrv) {
  return guarded([&] {
    require(res != nullptr, "null result");
    if (index >= res->res.rows.size()) sumdens::throw_invalid("row index out of range");
    const auto& r = res->res.rows[index];
    if (s) *s = r.s;
    if (method) *method = r.method.c_str();
    if (estimate) *estimate = r.estimate;
    if (std_error) *std_error = r.std_error;
    if (sqrt_wnrv) *sqrt_wnrv = r.sqrt_wnrv;
  });
}

const char* sd_result_metadata(const sd_result* res) { return res ? res->metadata.c_str() : ""; }

sd_status sd_result_write(const sd_result* res, const char* path, const char* format) {
  return guarded([&] {
    require(res && path && format, "null argument");
    sumdens::emit(res->res, path, sumdens::parse_format(format));
  });
}

void sd_result_destroy(sd_result* res) { delete res; }

sd_status sd_model_create(const char* copula, double param, size_t n,
                          const char* const* marginal_specs, sd_model** out) {
  return guarded([&] {
    require(copula && marginal_specs && out, "null argument");
    require(n >= 1, "model needs at least one marginal");
    *out = nullptr;
    sumdens::ExperimentConfig cfg;
    cfg.copula = copula;
    cfg.theta = param;
    cfg.rho = param;
    cfg.n = static_cast<int>(n);
    cfg.marginals.clear();
    for (size_t i = 0; i < n; ++i) {
      require(marginal_specs[i] != nullptr, "null marginal spec");
      cfg.marginals.emplace_back(marginal_specs[i]);
    }
    // A Gaussian copula with rho = 0 is still built as Gaussian here so the
    // caller gets the model they asked for.
    if (cfg.copula == "gaussian" && param == 0.0) {
      std::vector<sumdens::Marginal> ms;
      for (const auto& m : cfg.marginals) ms.push_back(sumdens::Marginal::parse(m));
      *out = new sd_model{sumdens::JointModel(sumdens::GaussianCopula::equicorrelated(cfg.n, 0.0),
                                              std::move(ms))};
      return;
    }
    *out = new sd_model{sumdens::build_model(cfg)};
  });
}

void sd_model_destroy(sd_model* model) { delete model; }

sd_status sd_model_log_density(const sd_model* model, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(model && x && out, "null argument");
    require(static_cast<int>(n) == model->model.dim(), "vector length does not match the model");
    *out = model->model.log_density({x, n});
  });
}

sd_status sd_model_score(const sd_model* model, const double* x, size_t n, double* out) {
  return guarded([&] {
    require(model && x && out, "null argument");
    require(static_cast<int>(n) == model->model.dim(), "vector length does not match the model");
    model->model.score({x, n}, {out, n});
  });
}

}  // extern "C"
