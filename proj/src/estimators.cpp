#include "sumdens/estimators.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "sumdens/error.hpp"
#include "sumdens/parallel.hpp"
#include "sumdens/stats.hpp"

namespace sumdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void require_nonzero(double s) {
  if (s == 0.0)
    throw_domain("the sensitivity estimator is undefined at s = 0; shift the statistic instead");
}

std::int64_t pilot_size(double pilot_frac, std::int64_t r) {
  if (!(pilot_frac >= 0.0 && pilot_frac < 1.0)) throw_invalid("pilot fraction must lie in [0, 1)");
  const auto m = static_cast<std::int64_t>(std::ceil(pilot_frac * static_cast<double>(r) - 1e-9));
  if (r - m < 2) {
    std::ostringstream os;
    os << "replicate count " << r << " leaves fewer than two evaluation replicates after a pilot of "
       << m;
    throw_invalid(os.str());
  }
  return m;
}

MeanSe summarize(std::span<const double> v, const ErrorOptions& errors) {
  return errors.method == ErrorMethod::BatchMeans ? batch_means(v, errors.batches) : mean_se(v);
}

// Everything the conditional estimators need from one replicate, independent
// of s.
class RowContext {
 public:
  RowContext(const JointModel& model, std::span<const double> x, double z)
      : model_(model), z_(z), n_(model.dim()), s_minus_(n_), m_minus_(n_), t_minus_(n_, 0.0) {
    double total = 0.0;
    for (double v : x) total += v;
    // Largest and second largest, for the max over the other coordinates.
    double top = -kInf;
    double second = -kInf;
    int top_i = -1;
    for (int i = 0; i < n_; ++i) {
      if (x[i] > top) {
        second = top;
        top = x[i];
        top_i = i;
      } else if (x[i] > second) {
        second = x[i];
      }
    }
    for (int i = 0; i < n_; ++i) {
      s_minus_[i] = total - x[i];
      m_minus_[i] = i == top_i ? second : top;
    }
    if (model.archimedean()) {
      std::vector<double> psi(n_);
      for (int i = 0; i < n_; ++i) psi[i] = model.psi_of(i, x[i]);
      std::vector<double> suffix(n_ + 1, 0.0);
      for (int i = n_ - 1; i >= 0; --i) suffix[i] = suffix[i + 1] + psi[i];
      double prefix = 0.0;
      for (int i = 0; i < n_; ++i) {
        t_minus_[i] = prefix + suffix[i + 1];
        prefix += psi[i];
      }
    }
  }

  double density(int i, double s, bool extended) const {
    const double xi = s - s_minus_[i];
    return extended ? model_.ext_conditional_density(i, xi, z_)
                    : model_.conditional_density_at(i, xi, t_minus_[i]);
  }

  double cond(double s, bool extended) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) acc += density(i, s, extended);
    return acc / n_;
  }

  double ak(double s, bool extended) const {
    double acc = 0.0;
    for (int i = 0; i < n_; ++i)
      if (m_minus_[i] + s_minus_[i] <= s) acc += density(i, s, extended);
    return acc;
  }

 private:
  const JointModel& model_;
  double z_;
  int n_;
  std::vector<double> s_minus_;
  std::vector<double> m_minus_;
  std::vector<double> t_minus_;
};

enum class CondKind { Cond, ExtCond, Ak, AkExt };

void check_capability(const JointModel& model, const ReplicateSet& reps, CondKind kind) {
  if (reps.n != model.dim()) throw_invalid("replicate dimension does not match the model");
  const bool extended = kind == CondKind::ExtCond || kind == CondKind::AkExt;
  if (extended) {
    if (!model.archimedean())
      throw_capability("frailty-extended estimators need an Archimedean copula");
    if (!reps.has_frailty())
      throw_capability("frailty-extended estimators need replicates that carry their frailty");
  } else if (!model.independent() && !model.archimedean()) {
    throw_capability(
        "conditional Monte Carlo is implemented for independence and Archimedean copulas");
  }
}

std::vector<EstimatorOutput> conditional_curve(const ReplicateSet& reps, const JointModel& model,
                                               std::span<const double> grid, CondKind kind,
                                               int workers) {
  check_capability(model, reps, kind);
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t r_count = reps.count;
  const auto g_count = static_cast<std::int64_t>(grid.size());
  std::vector<double> values(static_cast<std::size_t>(r_count * g_count));
  const bool extended = kind == CondKind::ExtCond || kind == CondKind::AkExt;
  const bool ak = kind == CondKind::Ak || kind == CondKind::AkExt;

  parallel_for(r_count, 512, workers, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t r = begin; r < end; ++r) {
      const double z = extended ? reps.frailty[r] : 0.0;
      const RowContext ctx(model, reps.row(r), z);
      for (std::int64_t g = 0; g < g_count; ++g)
        values[g * r_count + r] = ak ? ctx.ak(grid[g], extended) : ctx.cond(grid[g], extended);
    }
  });

  std::vector<EstimatorOutput> out(grid.size());
  for (std::int64_t g = 0; g < g_count; ++g) {
    const auto ms = mean_se(std::span<const double>(values).subspan(g * r_count, r_count));
    out[g] = {ms.mean, ms.std_error, r_count, 0.0};
  }
  const double secs = seconds_since(t0);
  for (auto& o : out) o.cpu_seconds = secs;
  return out;
}

}  // namespace

SensTerms sens_terms(std::span<const double> x, std::span<const double> score_x, double s, int n) {
  require_nonzero(s);
  if (x.size() != score_x.size()) throw_invalid("point and score have different lengths");
  double total = 0.0;
  double g = n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    total += x[i];
    g += x[i] * score_x[i];
  }
  const double f1 = total <= s ? g / s : 0.0;
  const double f2 = total > s ? -g / s : 0.0;
  return {f1, f2, f1 - f2};
}

double cv_coefficient(std::span<const SensTerms> pilot) {
  if (pilot.size() < 2) return 0.0;
  std::vector<double> f1(pilot.size());
  std::vector<double> d(pilot.size());
  for (std::size_t i = 0; i < pilot.size(); ++i) {
    f1[i] = pilot[i].f1;
    d[i] = pilot[i].d;
  }
  const double var = sample_variance(d);
  if (!(var > 0.0)) return 0.0;
  return sample_covariance(f1, d) / var;
}

SensitivityInputs sensitivity_inputs(const ReplicateSet& reps, const JointModel& model,
                                     int workers) {
  if (reps.n != model.dim()) throw_invalid("replicate dimension does not match the model");
  SensitivityInputs in;
  in.statistic.resize(static_cast<std::size_t>(reps.count));
  in.weight.resize(static_cast<std::size_t>(reps.count));
  const int n = reps.n;
  parallel_for(reps.count, 512, workers, [&](std::int64_t begin, std::int64_t end) {
    std::vector<double> score(n);
    for (std::int64_t r = begin; r < end; ++r) {
      const auto x = reps.row(r);
      model.score(x, score);
      double total = 0.0;
      double g = n;
      for (int i = 0; i < n; ++i) {
        total += x[i];
        g += x[i] * score[i];
      }
      in.statistic[r] = total;
      in.weight[r] = g;
    }
  });
  return in;
}

std::vector<EstimatorOutput> sensitivity_from_inputs(const SensitivityInputs& in,
                                                     std::span<const double> grid,
                                                     double pilot_frac, ErrorOptions errors) {
  const auto r_count = static_cast<std::int64_t>(in.statistic.size());
  const std::int64_t m = pilot_size(pilot_frac, r_count);
  std::vector<EstimatorOutput> out;
  out.reserve(grid.size());
  std::vector<SensTerms> pilot(static_cast<std::size_t>(m));
  std::vector<double> eval(static_cast<std::size_t>(r_count - m));
  for (double s : grid) {
    require_nonzero(s);
    auto terms = [&](std::int64_t r) -> SensTerms {
      const double v = in.weight[r] / s;
      const double f1 = in.statistic[r] <= s ? v : 0.0;
      const double f2 = in.statistic[r] > s ? -v : 0.0;
      return {f1, f2, f1 - f2};
    };
    for (std::int64_t r = 0; r < m; ++r) pilot[r] = terms(r);
    const double beta = cv_coefficient(pilot);
    for (std::int64_t r = m; r < r_count; ++r) {
      const auto t = terms(r);
      eval[r - m] = t.f1 - beta * t.d;
    }
    const auto ms = summarize(eval, errors);
    out.push_back({ms.mean, ms.std_error, r_count - m, 0.0});
  }
  return out;
}

std::vector<SensitivityDiagnostics> sensitivity_diagnostics(const SensitivityInputs& in,
                                                            std::span<const double> grid,
                                                            double pilot_frac) {
  const auto r_count = static_cast<std::int64_t>(in.statistic.size());
  const std::int64_t m = pilot_size(pilot_frac, r_count);
  std::vector<SensitivityDiagnostics> out;
  std::vector<double> f1(r_count), f2(r_count), d(r_count);
  for (double s : grid) {
    require_nonzero(s);
    for (std::int64_t r = 0; r < r_count; ++r) {
      const double v = in.weight[r] / s;
      f1[r] = in.statistic[r] <= s ? v : 0.0;
      f2[r] = in.statistic[r] > s ? -v : 0.0;
      d[r] = f1[r] - f2[r];
    }
    SensitivityDiagnostics diag{};
    diag.s = s;
    std::vector<SensTerms> pilot(m);
    for (std::int64_t r = 0; r < m; ++r) pilot[r] = {f1[r], f2[r], d[r]};
    diag.beta = cv_coefficient(pilot);
    diag.mean_f1 = sample_mean(f1);
    diag.mean_f2 = sample_mean(f2);
    diag.se_d = mean_se(d).std_error;

    const std::span<const double> plain(f1.data() + m, r_count - m);
    std::vector<double> cv(r_count - m);
    for (std::int64_t r = m; r < r_count; ++r) cv[r - m] = f1[r] - diag.beta * d[r];
    const double mp = sample_mean(plain);
    const double mc = sample_mean(cv);
    std::vector<double> w(r_count - m);
    for (std::int64_t k = 0; k < r_count - m; ++k)
      w[k] = (cv[k] - mc) * (cv[k] - mc) - (plain[k] - mp) * (plain[k] - mp);
    diag.var_plain = sample_variance(plain);
    diag.var_cv = sample_variance(cv);
    diag.se_var_diff = mean_se(w).std_error;
    out.push_back(diag);
  }
  return out;
}

std::vector<EstimatorOutput> estimate_sensitivity(const ReplicateSet& reps,
                                                  const JointModel& model,
                                                  std::span<const double> grid,
                                                  double pilot_frac, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto in = sensitivity_inputs(reps, model, workers);
  auto out = sensitivity_from_inputs(in, grid, pilot_frac);
  const double secs = seconds_since(t0);
  for (auto& o : out) o.cpu_seconds = secs;
  return out;
}

EstimatorOutput estimate_sensitivity(const ReplicateSet& reps, const JointModel& model, double s,
                                     double pilot_frac) {
  const double grid[] = {s};
  return estimate_sensitivity(reps, model, grid, pilot_frac).front();
}

double cond_value(const JointModel& model, std::span<const double> x, double s) {
  return RowContext(model, x, 0.0).cond(s, false);
}

double ext_cond_value(const JointModel& model, std::span<const double> x, double z, double s) {
  return RowContext(model, x, z).cond(s, true);
}

double ak_value(const JointModel& model, std::span<const double> x, double s, double z) {
  const bool extended = z > 0.0;
  return RowContext(model, x, z).ak(s, extended);
}

std::vector<EstimatorOutput> estimate_cond(const ReplicateSet& reps, const JointModel& model,
                                           std::span<const double> grid, int workers) {
  return conditional_curve(reps, model, grid, CondKind::Cond, workers);
}

std::vector<EstimatorOutput> estimate_ext_cond(const ReplicateSet& reps, const JointModel& model,
                                               std::span<const double> grid, int workers) {
  return conditional_curve(reps, model, grid, CondKind::ExtCond, workers);
}

std::vector<EstimatorOutput> estimate_ak(const ReplicateSet& reps, const JointModel& model,
                                         std::span<const double> grid, bool extended,
                                         int workers) {
  return conditional_curve(reps, model, grid, extended ? CondKind::AkExt : CondKind::Ak, workers);
}

EstimatorOutput estimate_cond(const ReplicateSet& reps, const JointModel& model, double s) {
  const double grid[] = {s};
  return estimate_cond(reps, model, grid).front();
}

EstimatorOutput estimate_ext_cond(const ReplicateSet& reps, const JointModel& model, double s) {
  const double grid[] = {s};
  return estimate_ext_cond(reps, model, grid).front();
}

EstimatorOutput estimate_ak(const ReplicateSet& reps, const JointModel& model, double s,
                            bool extended) {
  const double grid[] = {s};
  return estimate_ak(reps, model, grid, extended).front();
}

std::vector<EstimatorOutput> marginal_sens(std::span<const double> samples,
                                           std::span<const double> scores, int dim, int i,
                                           std::span<const double> grid, double shift_a,
                                           double pilot_frac, ErrorOptions errors) {
  if (dim < 1 || samples.size() % dim != 0 || samples.size() != scores.size())
    throw_invalid("samples and scores must be matching row-major matrices");
  if (i < 0 || i >= dim) throw_invalid("coordinate index out of range");
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t m = samples.size() / dim;
  SensitivityInputs in;
  in.statistic.resize(m);
  in.weight.resize(m);
  for (std::size_t r = 0; r < m; ++r) {
    const double v = samples[r * dim + i] + shift_a;
    in.statistic[r] = v;
    in.weight[r] = v * scores[r * dim + i] + 1.0;
  }
  std::vector<double> shifted(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    shifted[g] = grid[g] + shift_a;
    if (shifted[g] == 0.0) {
      std::ostringstream os;
      os << "grid point " << grid[g] << " maps to 0 under shift " << shift_a
         << "; choose a different shift";
      throw_domain(os.str());
    }
  }
  auto out = sensitivity_from_inputs(in, shifted, pilot_frac, errors);
  const double secs = seconds_since(t0);
  for (auto& o : out) o.cpu_seconds = secs;
  return out;
}

}  // namespace sumdens
