#include "sumdens/joint_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sumdens/error.hpp"
#include "sumdens/normal.hpp"

namespace sumdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = std::numeric_limits<double>::min();

// Generator values at u = F(x), fed with the marginal's survival so that
// psi stays accurate near u = 1. Probabilities that underflow are clamped to
// the smallest normal double.
GeneratorValues generator_at(const ArchimedeanFamily& fam, const Marginal& m, double x) {
  double u = m.cdf(x);
  double ubar = m.survival(x);
  if (u < kTiny) u = kTiny;
  if (ubar < kTiny) ubar = kTiny;
  if (u > 0.5) u = 1.0 - ubar;
  return fam.generator(u, ubar);
}

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

JointModel::JointModel(Copula copula, std::vector<Marginal> marginals)
    : copula_(std::move(copula)), marginals_(std::move(marginals)) {
  if (marginals_.empty()) throw_invalid("a joint model needs at least one marginal");
  if (const auto* g = gaussian(); g && g->dim() != dim()) {
    std::ostringstream os;
    os << "Gaussian copula has dimension " << g->dim() << " but " << dim() << " marginals given";
    throw_invalid(os.str());
  }
}

bool JointModel::all_positive() const {
  for (const auto& m : marginals_)
    if (!m.positive()) return false;
  return true;
}

void JointModel::require_dim(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    std::ostringstream os;
    os << "point has " << x.size() << " coordinates, model has " << dim();
    throw_invalid(os.str());
  }
}

double JointModel::psi_of(int i, double xi) const {
  const auto* fam = archimedean();
  if (!fam) throw_capability("psi is only defined for Archimedean copulas");
  return generator_at(*fam, marginals_[i], xi).psi;
}

double JointModel::log_density(std::span<const double> x) const {
  require_dim(x);
  const int n = dim();
  double marg = 0.0;
  for (int i = 0; i < n; ++i) {
    if (!marginals_[i].in_support(x[i])) return -kInf;
    marg += marginals_[i].log_pdf(x[i]);
  }
  if (independent()) return marg;
  if (const auto* fam = archimedean()) {
    CompensatedSum t;
    double acc = marg;
    for (int i = 0; i < n; ++i) {
      const auto g = generator_at(*fam, marginals_[i], x[i]);
      t.add(g.psi);
      acc += g.log_neg_dpsi;
    }
    return acc + fam->phi_deriv(t.value(), n).log_abs;
  }
  const auto& gc = *gaussian();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = marginals_[i].normal_score(x[i]);
  const double quad = z.dot(gc.solve(z));
  return marg - 0.5 * quad + 0.5 * z.squaredNorm() - 0.5 * gc.log_det();
}

std::vector<double> JointModel::score(std::span<const double> x) const {
  std::vector<double> out(x.size());
  score(x, out);
  return out;
}

void JointModel::score(std::span<const double> x, std::span<double> out) const {
  require_dim(x);
  const int n = dim();
  if (static_cast<int>(out.size()) != n) throw_invalid("score output has the wrong size");
  for (int i = 0; i < n; ++i) {
    if (!marginals_[i].in_support(x[i]) || !std::isfinite(x[i])) {
      std::ostringstream os;
      os << "score undefined at coordinate " << i << " = " << x[i] << " (support boundary)";
      throw_domain(os.str());
    }
    out[i] = marginals_[i].score(x[i]);
  }
  if (independent()) return;

  if (const auto* fam = archimedean()) {
    std::vector<GeneratorValues> g(n);
    std::vector<double> log_f(n);
    CompensatedSum t;
    for (int i = 0; i < n; ++i) {
      g[i] = generator_at(*fam, marginals_[i], x[i]);
      log_f[i] = marginals_[i].log_pdf(x[i]);
      t.add(g[i].psi);
    }
    const double tv = t.value();
    // phi^(n+1)/phi^(n) < 0 and psi' < 0, so the first term is positive.
    const double log_ratio = fam->phi_deriv(tv, n + 1).log_abs - fam->phi_deriv(tv, n).log_abs;
    for (int i = 0; i < n; ++i) {
      const double f = std::exp(log_f[i]);
      out[i] += std::exp(log_ratio + g[i].log_neg_dpsi + log_f[i]) + g[i].d2_over_d1 * f;
    }
    return;
  }

  const auto& gc = *gaussian();
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = marginals_[i].normal_score(x[i]);
  const Eigen::VectorXd w = gc.solve(z);
  for (int i = 0; i < n; ++i) {
    const double dz_dx = std::exp(marginals_[i].log_pdf(x[i]) - normal::log_pdf(z[i]));
    out[i] += (z[i] - w[i]) * dz_dx;
  }
}

double JointModel::conditional_density(int i, std::span<const double> x) const {
  require_dim(x);
  if (i < 0 || i >= dim()) throw_invalid("coordinate index out of range");
  if (independent()) return conditional_density_at(i, x[i], 0.0);
  const auto* fam = archimedean();
  if (!fam)
    throw_capability("conditional densities of a Gaussian copula go through the sequential "
                     "normal-conditional path");
  CompensatedSum rest;
  for (int j = 0; j < dim(); ++j) {
    if (j == i) continue;
    if (!marginals_[j].in_support(x[j])) return 0.0;
    rest.add(generator_at(*fam, marginals_[j], x[j]).psi);
  }
  return conditional_density_at(i, x[i], rest.value());
}

double JointModel::conditional_density_at(int i, double xi, double t_rest) const {
  const Marginal& m = marginals_[i];
  if (!m.in_support(xi)) return 0.0;
  if (independent()) return m.pdf(xi);
  const auto* fam = archimedean();
  if (!fam) throw_capability("conditional density requires an Archimedean or independence copula");
  const int n = dim();
  const auto g = generator_at(*fam, m, xi);
  const double log_num = fam->phi_deriv(t_rest + g.psi, n).log_abs;
  const double log_den = fam->phi_deriv(t_rest, n - 1).log_abs;
  return std::exp(m.log_pdf(xi) + g.log_neg_dpsi + log_num - log_den);
}

double JointModel::ext_conditional_density(int i, double xi, double z) const {
  const auto* fam = archimedean();
  if (!fam) throw_capability("the frailty-extended conditional density needs an Archimedean copula");
  if (i < 0 || i >= dim()) throw_invalid("coordinate index out of range");
  if (!(z > 0.0)) throw_domain("frailty must be positive");
  const Marginal& m = marginals_[i];
  if (!m.in_support(xi)) return 0.0;
  const auto g = generator_at(*fam, m, xi);
  return std::exp(std::log(z) + g.log_neg_dpsi + m.log_pdf(xi) - z * g.psi);
}

}  // namespace sumdens
