#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumdens/joint_model.hpp"
#include "sumdens/replicates.hpp"

namespace sumdens {

/// The two likelihood-ratio estimators of f_S(s) for one replicate and
/// their difference d = f1 - f2 (mean zero, used as control variate).
struct SensTerms {
  double f1;
  double f2;
  double d;
};

SensTerms sens_terms(std::span<const double> x, std::span<const double> score_x, double s, int n);

/// beta = Cov(f1, d) / Var(d) from a pilot; 0 for pilots of size < 2 or
/// constant d.
double cv_coefficient(std::span<const SensTerms> pilot);

struct EstimatorOutput {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t r_used = 0;
  double cpu_seconds = 0.0;
};

enum class ErrorMethod { Iid, BatchMeans };

struct ErrorOptions {
  ErrorMethod method = ErrorMethod::Iid;
  int batches = 25;
};

// ---- sensitivity estimator -------------------------------------------------

/// Per-replicate quantities the sensitivity estimator needs at every s:
/// the statistic v (the sum 1.x, or one shifted coordinate) and the weight
/// g (x.score + n, or x_i * score_i + 1).
struct SensitivityInputs {
  std::vector<double> statistic;
  std::vector<double> weight;
};

SensitivityInputs sensitivity_inputs(const ReplicateSet& reps, const JointModel& model,
                                     int workers = 1);

/// f1 - beta d averaged over the replicates after the pilot. beta is fit per
/// s on the first ceil(pilot_frac R) replicates, which are then discarded.
std::vector<EstimatorOutput> sensitivity_from_inputs(const SensitivityInputs& in,
                                                     std::span<const double> grid,
                                                     double pilot_frac,
                                                     ErrorOptions errors = {});

struct SensitivityDiagnostics {
  double s;
  double beta;
  double mean_f1;  // all replicates
  double mean_f2;
  double se_d;     // SE of mean(f1 - f2) over all replicates
  double var_plain;    // Var(f1) on the evaluation set
  double var_cv;       // Var(f1 - beta d) on the evaluation set
  double se_var_diff;  // SE of var_cv - var_plain (paired)
};

std::vector<SensitivityDiagnostics> sensitivity_diagnostics(const SensitivityInputs& in,
                                                            std::span<const double> grid,
                                                            double pilot_frac);

std::vector<EstimatorOutput> estimate_sensitivity(const ReplicateSet& reps,
                                                  const JointModel& model,
                                                  std::span<const double> grid,
                                                  double pilot_frac = 0.05, int workers = 1);
EstimatorOutput estimate_sensitivity(const ReplicateSet& reps, const JointModel& model, double s,
                                     double pilot_frac = 0.05);

// ---- conditional Monte Carlo family -----------------------------------------

/// (1/n) sum_i f_{X_i|X_-i}(s - S_-i) for one replicate.
double cond_value(const JointModel& model, std::span<const double> x, double s);
/// (1/n) sum_i f_{X_i|X_-i,Z}(s - S_-i).
double ext_cond_value(const JointModel& model, std::span<const double> x, double z, double s);
/// sum_i f_{X_i|X_-i}(s - S_-i) 1{M_-i + S_-i <= s}; pass z > 0 for the
/// frailty-extended variant, z <= 0 (or NaN) for the plain one.
double ak_value(const JointModel& model, std::span<const double> x, double s, double z = 0.0);

std::vector<EstimatorOutput> estimate_cond(const ReplicateSet& reps, const JointModel& model,
                                           std::span<const double> grid, int workers = 1);
std::vector<EstimatorOutput> estimate_ext_cond(const ReplicateSet& reps, const JointModel& model,
                                               std::span<const double> grid, int workers = 1);
std::vector<EstimatorOutput> estimate_ak(const ReplicateSet& reps, const JointModel& model,
                                         std::span<const double> grid, bool extended,
                                         int workers = 1);

EstimatorOutput estimate_cond(const ReplicateSet& reps, const JointModel& model, double s);
EstimatorOutput estimate_ext_cond(const ReplicateSet& reps, const JointModel& model, double s);
EstimatorOutput estimate_ak(const ReplicateSet& reps, const JointModel& model, double s,
                            bool extended);

// ---- marginal densities ----------------------------------------------------

/// Estimates f_{X_i}(s) on the grid from draws X (row-major, `dim` columns)
/// and their scores grad log f(X), after shifting coordinate i by shift_a.
/// The target density may be unnormalized.
std::vector<EstimatorOutput> marginal_sens(std::span<const double> samples,
                                           std::span<const double> scores, int dim, int i,
                                           std::span<const double> grid, double shift_a,
                                           double pilot_frac = 0.05, ErrorOptions errors = {});

}  // namespace sumdens
