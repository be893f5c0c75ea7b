#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sumdens/estimators.hpp"

namespace sumdens {

/// Bayesian logistic regression with a N(0, I) prior. The design carries an
/// intercept column followed by standardized predictors.
struct LogisticModel {
  Eigen::MatrixXd design;
  Eigen::VectorXd response;
  std::vector<std::string> names;  // "intercept", then predictor column names

  int dim() const { return static_cast<int>(design.cols()); }
  int coefficient_index(const std::string& name) const;
};

/// Predictors used for the Pima model, in design order after the intercept.
inline const std::vector<std::string> kPimaPredictors = {"npreg", "glu", "bmi", "ped", "age"};
inline constexpr const char* kPimaOutcome = "diabetes";
inline constexpr int kPimaRows = 532;

/// Reads a headered CSV, keeps `predictors` (standardized, sample sd) and the
/// 0/1 outcome column.
LogisticModel load_logistic_csv(const std::string& path, const std::vector<std::string>& predictors,
                                const std::string& outcome,
                                std::optional<int> expected_rows = std::nullopt);

/// The 532-row Pima file (columns npreg, glu, bp, skin, bmi, ped, age,
/// diabetes).
LogisticModel load_pima(const std::string& path);

struct LogPostGrad {
  double logp;
  std::vector<double> grad;
};

/// Unnormalized log posterior and its gradient.
LogPostGrad log_post_and_grad(const LogisticModel& model, std::span<const double> beta);

/// log target and gradient at a point; returns log density, fills grad.
using LogTarget = std::function<double(std::span<const double> x, std::span<double> grad)>;

LogTarget logistic_target(const LogisticModel& model);

struct Chain {
  int dim = 0;
  std::vector<double> samples;  // steps x dim, row-major
  std::vector<double> scores;   // gradient of the log target at each sample
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;

  std::int64_t steps() const { return dim == 0 ? 0 : static_cast<std::int64_t>(samples.size()) / dim; }
  std::vector<double> coordinate(int i) const;
};

/// Isotropic Gaussian random-walk Metropolis. Keeps `keep` states after
/// `burn_in` steps, storing every `thin`-th one.
Chain rw_metropolis(const LogTarget& target, std::span<const double> init, double step_var,
                    std::int64_t burn_in, std::int64_t keep, std::uint64_t seed,
                    std::int64_t thin = 1);

/// Shift that moves a grid away from zero: max(0, 0.5 - min(grid)).
double default_shift(std::span<const double> grid);

/// Marginal posterior density of one coordinate on the grid, with batch-means
/// standard errors (the chain is autocorrelated).
std::vector<EstimatorOutput> marginal_posterior_density(const Chain& chain, int coordinate,
                                                        std::span<const double> grid,
                                                        double shift_a, double pilot_frac = 0.05,
                                                        int batches = 25);

/// Silverman's rule 0.9 min(sd, IQR/1.34) m^{-1/5}.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian-kernel density estimate on the grid.
std::vector<double> kde(std::span<const double> samples, std::span<const double> grid);

}  // namespace sumdens
