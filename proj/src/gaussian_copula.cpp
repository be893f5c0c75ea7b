#include "sumdens/gaussian_copula.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "sumdens/error.hpp"

namespace sumdens {

GaussianCopula::GaussianCopula(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
  const auto n = sigma_.rows();
  if (n < 1 || sigma_.cols() != n) throw_invalid("correlation matrix must be square and nonempty");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::fabs(sigma_(i, i) - 1.0) > 1e-12)
      throw_invalid("correlation matrix must have a unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j)
      if (std::fabs(sigma_(i, j) - sigma_(j, i)) > 1e-12)
        throw_invalid("correlation matrix must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma_);
  if (llt.info() != Eigen::Success) throw_invalid("correlation matrix is not positive definite");
  chol_ = llt.matrixL();
  log_det_ = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) log_det_ += 2.0 * std::log(chol_(i, i));

  bool equi = true;
  const double r = n > 1 ? sigma_(1, 0) : 0.0;
  for (Eigen::Index i = 0; i < n && equi; ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (sigma_(i, j) != r) {
        equi = false;
        break;
      }
  if (equi) rho_ = r;
}

GaussianCopula GaussianCopula::equicorrelated(int n, double rho) {
  if (n < 1) throw_invalid("dimension must be positive");
  if (n > 1 && !(rho > -1.0 / (n - 1) && rho < 1.0)) {
    std::ostringstream os;
    os << "equicorrelation rho=" << rho << " must lie in (" << -1.0 / (n - 1) << ", 1)";
    throw_invalid(os.str());
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, rho);
  s.diagonal().setOnes();
  return GaussianCopula(std::move(s));
}

ConditionalNormal GaussianCopula::conditional(std::span<const double> z_prefix) const {
  const auto m = static_cast<int>(z_prefix.size());
  if (m >= dim()) throw_invalid("conditioning prefix must be shorter than the dimension");
  if (!rho_) return conditional_generic(z_prefix);
  const double rho = *rho_;
  if (m == 0) return {0.0, 1.0};
  double sum = 0.0;
  for (double z : z_prefix) sum += z;
  // k = m + 1 in one-based terms.
  const double denom = 1.0 + (m - 1) * rho;
  const double var = (1.0 - rho) * (1.0 + m * rho) / denom;
  return {rho / denom * sum, std::sqrt(var)};
}

ConditionalNormal GaussianCopula::conditional_generic(std::span<const double> z_prefix) const {
  const auto m = static_cast<int>(z_prefix.size());
  if (m >= dim()) throw_invalid("conditioning prefix must be shorter than the dimension");
  std::vector<double> xi(m);
  double mean = 0.0;
  for (int j = 0; j < m; ++j) {
    double acc = z_prefix[j];
    for (int l = 0; l < j; ++l) acc -= chol_(j, l) * xi[l];
    xi[j] = acc / chol_(j, j);
    mean += chol_(m, j) * xi[j];
  }
  return {mean, chol_(m, m)};
}

Eigen::VectorXd GaussianCopula::solve(const Eigen::VectorXd& z) const {
  if (rho_) {
    const double rho = *rho_;
    const double n = static_cast<double>(dim());
    const double c = rho / (1.0 + (n - 1.0) * rho);
    return (z.array() - c * z.sum()).matrix() / (1.0 - rho);
  }
  const auto l = chol_.triangularView<Eigen::Lower>();
  return l.transpose().solve(l.solve(z));
}

void GaussianCopula::sample_latent(RandomStream& rng, std::span<double> z) const {
  const int n = dim();
  if (rho_ && *rho_ >= 0.0) {
    const double w = std::sqrt(*rho_) * rng.normal();
    const double s = std::sqrt(1.0 - *rho_);
    for (int i = 0; i < n; ++i) z[i] = w + s * rng.normal();
    return;
  }
  std::vector<double> xi(n);
  for (auto& v : xi) v = rng.normal();
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j <= i; ++j) acc += chol_(i, j) * xi[j];
    z[i] = acc;
  }
}

}  // namespace sumdens
