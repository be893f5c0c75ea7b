#include "sumdens/archimedean.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sumdens/error.hpp"

namespace sumdens {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Positive stable variate with Laplace transform exp(-t^alpha), Kanter's
// representation.
double positive_stable(double alpha, RandomStream& rng) {
  if (alpha == 1.0) return 1.0;
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha);
  const double b = std::pow(std::sin((1.0 - alpha) * u) / e, (1.0 - alpha) / alpha);
  return a * b;
}

// Logarithmic series P(Z = k) = p^k / (-k log(1 - p)) with
// log(1 - p) = -theta. Kemp's LK method.
double logarithmic_series(double theta, RandomStream& rng) {
  if (theta < 1e-6) return 1.0;
  const double p = -std::expm1(-theta);
  const double v = rng.uniform();
  if (v >= p) return 1.0;
  const double q = -std::expm1(-theta * rng.uniform());
  if (v <= q * q) return std::floor(1.0 + std::log(v) / std::log(q));
  return v <= q ? 2.0 : 1.0;
}

}  // namespace

ArchimedeanFamily::ArchimedeanFamily(ArchimedeanKind kind, double theta)
    : kind_(kind), theta_(theta) {
  const bool ok = std::isfinite(theta) &&
                  (kind == ArchimedeanKind::GumbelHougaard ? theta >= 1.0 : theta > 0.0);
  if (!ok) {
    std::ostringstream os;
    os << "invalid theta " << theta << " for " << name()
       << (kind == ArchimedeanKind::GumbelHougaard ? " (need theta >= 1)" : " (need theta > 0)");
    throw_invalid(os.str());
  }
  if (kind == ArchimedeanKind::Clayton) return;

  // Gumbel: phi^(k)(t) = (-1)^k phi(t) t^-k P_k(t^a), a = 1/theta,
  //   P_{k+1}(x) = (k + a x) P_k(x) - a x P_k'(x), P_0 = 1.
  // Frank: phi^(k)(t) = (-1)^k Q_k(v) / theta, v = w/(1-w),
  //   w = (1 - e^-theta) e^-t, Q_{k+1}(v) = v (1+v) Q_k'(v), Q_1 = v.
  // All coefficients are nonnegative, so both recurrences stay in log space.
  const int kmax = kMaxDerivative + 1;
  log_coef_.assign(kmax + 1, {});
  log_coef_[0] = {kind == ArchimedeanKind::GumbelHougaard ? 0.0 : -kInf};
  if (kind == ArchimedeanKind::Frank) log_coef_[1] = {-kInf, 0.0};
  const double alpha = 1.0 / theta;
  const int start = kind == ArchimedeanKind::Frank ? 1 : 0;
  for (int k = start; k < kmax; ++k) {
    const auto& prev = log_coef_[k];
    std::vector<double> next(k + 2, -kInf);
    for (int j = 0; j <= k + 1; ++j) {
      const double cur = j <= k ? prev[j] : -kInf;
      const double lower = j >= 1 ? prev[j - 1] : -kInf;
      double w_cur;
      double w_lower;
      if (kind == ArchimedeanKind::GumbelHougaard) {
        w_cur = k - alpha * j;
        w_lower = alpha;
      } else {
        w_cur = j;
        w_lower = j - 1;
      }
      double acc = -kInf;
      if (w_cur > 0.0 && cur > -kInf) acc = log_add(acc, std::log(w_cur) + cur);
      if (w_lower > 0.0 && lower > -kInf) acc = log_add(acc, std::log(w_lower) + lower);
      next[j] = acc;
    }
    log_coef_[k + 1] = std::move(next);
  }
}

std::string ArchimedeanFamily::name() const {
  switch (kind_) {
    case ArchimedeanKind::Clayton: return "clayton";
    case ArchimedeanKind::GumbelHougaard: return "gumbel";
    case ArchimedeanKind::Frank: return "frank";
  }
  return "?";
}

GeneratorValues ArchimedeanFamily::generator(double u) const { return generator(u, 1.0 - u); }

GeneratorValues ArchimedeanFamily::generator(double u, double ubar) const {
  if (!(u > 0.0 && u <= 1.0)) {
    std::ostringstream os;
    os << "generator argument " << u << " outside (0,1]";
    throw_domain(os.str());
  }
  const double th = theta_;
  const double lu = ubar < 0.5 ? std::log1p(-ubar) : std::log(u);
  GeneratorValues g{};
  switch (kind_) {
    case ArchimedeanKind::Clayton:
      g.psi = std::expm1(-th * lu);
      g.log_neg_dpsi = std::log(th) - (th + 1.0) * lu;
      g.d2_over_d1 = -(th + 1.0) / u;
      break;
    case ArchimedeanKind::GumbelHougaard: {
      const double big_l = -lu;
      g.psi = std::pow(big_l, th);
      g.log_neg_dpsi = std::log(th) + (th - 1.0) * std::log(big_l) - lu;
      g.d2_over_d1 = -((th - 1.0) + big_l) / (u * big_l);
      break;
    }
    case ArchimedeanKind::Frank: {
      if (u < 0.5)
        g.psi = std::log(-std::expm1(-th)) - std::log(-std::expm1(-th * u));
      else
        g.psi = -std::log1p(std::exp(-th) * std::expm1(th * ubar) / std::expm1(-th));
      // psi'(u) = -theta / (e^{theta u} - 1)
      g.log_neg_dpsi = std::log(th) - (th * u + std::log(-std::expm1(-th * u)));
      g.d2_over_d1 = -th / (-std::expm1(-th * u));
      break;
    }
  }
  g.dpsi = -std::exp(g.log_neg_dpsi);
  g.d2psi = g.d2_over_d1 * g.dpsi;
  return g;
}

namespace {

// log(1 - w) with w = (1 - e^-theta) e^-t. When w is near 1 the direct form
// cancels, so use 1 - w = (1 - e^-t) + e^-(theta + t) instead.
double frank_log1m_w(double theta, double t) {
  const double w = -std::expm1(-theta) * std::exp(-t);
  if (w < 0.5) return std::log1p(-w);
  return std::log(-std::expm1(-t) + std::exp(-theta - t));
}

}  // namespace

double ArchimedeanFamily::log_phi(double t) const {
  switch (kind_) {
    case ArchimedeanKind::Clayton:
      return -std::log1p(t) / theta_;
    case ArchimedeanKind::GumbelHougaard:
      return -std::pow(t, 1.0 / theta_);
    case ArchimedeanKind::Frank: {
      return std::log(-frank_log1m_w(theta_, t)) - std::log(theta_);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ArchimedeanFamily::phi(double t) const { return std::exp(log_phi(t)); }

double ArchimedeanFamily::log_poly(int k, double log_x) const {
  const auto& row = log_coef_[k];
  double m = -kInf;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] > -kInf) m = std::max(m, row[j] + static_cast<double>(j) * log_x);
  if (m == -kInf || m == kInf) return m;
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] > -kInf) acc += std::exp(row[j] + static_cast<double>(j) * log_x - m);
  return m + std::log(acc);
}

SignedLog ArchimedeanFamily::phi_deriv(double t, int k) const {
  if (k < 0 || k > kMaxDerivative) {
    std::ostringstream os;
    os << "phi derivative order " << k << " outside [0, " << kMaxDerivative << "]";
    throw_capability(os.str());
  }
  if (!(t >= 0.0)) throw_domain("phi derivative requires t >= 0");
  const int sign = (k % 2 == 0) ? 1 : -1;
  if (k == 0) return {log_phi(t), 1};
  switch (kind_) {
    case ArchimedeanKind::Clayton: {
      const double a = 1.0 / theta_;
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += std::log(a + j);
      return {acc - (a + k) * std::log1p(t), sign};
    }
    case ArchimedeanKind::GumbelHougaard: {
      const double alpha = 1.0 / theta_;
      if (alpha == 1.0) return {-t, sign};
      if (t == 0.0) return {kInf, sign};
      const double lt = std::log(t);
      return {log_phi(t) - k * lt + log_poly(k, alpha * lt), sign};
    }
    case ArchimedeanKind::Frank: {
      const double log_w = std::log(-std::expm1(-theta_)) - t;
      const double log_v = log_w - frank_log1m_w(theta_, t);
      return {log_poly(k, log_v) - std::log(theta_), sign};
    }
  }
  return {std::numeric_limits<double>::quiet_NaN(), sign};
}

double ArchimedeanFamily::sample_frailty(RandomStream& rng) const {
  switch (kind_) {
    case ArchimedeanKind::Clayton:
      return rng.gamma(1.0 / theta_);
    case ArchimedeanKind::GumbelHougaard:
      return positive_stable(1.0 / theta_, rng);
    case ArchimedeanKind::Frank:
      return logarithmic_series(theta_, rng);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace sumdens
