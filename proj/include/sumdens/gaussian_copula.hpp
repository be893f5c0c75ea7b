#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>

#include "sumdens/rng.hpp"

namespace sumdens {

struct ConditionalNormal {
  double mean;
  double sd;
};

/// Gaussian copula with correlation matrix Sigma. Equicorrelated matrices
/// (rho 11' + (1 - rho) I) are detected and served by closed forms.
class GaussianCopula {
 public:
  explicit GaussianCopula(Eigen::MatrixXd sigma);
  static GaussianCopula equicorrelated(int n, double rho);

  int dim() const { return static_cast<int>(sigma_.rows()); }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  /// Lower-triangular L with L L' = Sigma.
  const Eigen::MatrixXd& chol() const { return chol_; }
  std::optional<double> equicorr_rho() const { return rho_; }

  /// Law of Z_{m+1} given Z_1..Z_m = z_prefix (m = z_prefix.size() < dim()).
  ConditionalNormal conditional(std::span<const double> z_prefix) const;
  /// Same, always through the Cholesky factor.
  ConditionalNormal conditional_generic(std::span<const double> z_prefix) const;

  /// Sigma^{-1} z.
  Eigen::VectorXd solve(const Eigen::VectorXd& z) const;
  double log_det() const { return log_det_; }

  /// One draw of the latent N(0, Sigma) vector.
  void sample_latent(RandomStream& rng, std::span<double> z) const;

 private:
  Eigen::MatrixXd sigma_;
  Eigen::MatrixXd chol_;
  std::optional<double> rho_;
  double log_det_ = 0.0;
};

}  // namespace sumdens
