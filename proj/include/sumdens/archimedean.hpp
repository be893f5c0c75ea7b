#pragma once

#include <string>
#include <vector>

#include "sumdens/rng.hpp"

namespace sumdens {

enum class ArchimedeanKind { Clayton, GumbelHougaard, Frank };

/// psi and its first two derivatives at u, plus the two combinations the
/// joint score needs in a form that does not overflow.
struct GeneratorValues {
  double psi;
  double dpsi;
  double d2psi;
  double log_neg_dpsi;  // log(-psi'(u))
  double d2_over_d1;    // psi''(u) / psi'(u)
};

struct SignedLog {
  double log_abs;
  int sign;
};

/// Exchangeable Archimedean copula C(u) = phi(sum psi(u_i)), phi = psi^{-1}.
/// Conventions: Clayton psi(u) = u^-theta - 1 (theta > 0); Gumbel-Hougaard
/// psi(u) = (-ln u)^theta (theta >= 1); Frank
/// psi(u) = -ln((e^{-theta u} - 1)/(e^{-theta} - 1)) (theta > 0).
class ArchimedeanFamily {
 public:
  static constexpr int kMaxDerivative = 40;

  ArchimedeanFamily(ArchimedeanKind kind, double theta);
  static ArchimedeanFamily clayton(double theta) { return {ArchimedeanKind::Clayton, theta}; }
  static ArchimedeanFamily gumbel(double theta) { return {ArchimedeanKind::GumbelHougaard, theta}; }
  static ArchimedeanFamily frank(double theta) { return {ArchimedeanKind::Frank, theta}; }

  ArchimedeanKind kind() const { return kind_; }
  double theta() const { return theta_; }
  std::string name() const;

  /// Requires 0 < u <= 1. The two-argument form takes ubar = 1 - u computed
  /// by the caller, which keeps psi accurate for u close to 1.
  GeneratorValues generator(double u) const;
  GeneratorValues generator(double u, double ubar) const;
  double psi(double u) const { return generator(u).psi; }

  double phi(double t) const;
  double log_phi(double t) const;

  /// log|phi^(k)(t)| and its sign, for 0 <= k <= kMaxDerivative and t >= 0.
  SignedLog phi_deriv(double t, int k) const;

  /// Draw Z with E[exp(-t Z)] = phi(t).
  double sample_frailty(RandomStream& rng) const;

 private:
  double log_poly(int k, double log_x) const;

  ArchimedeanKind kind_;
  double theta_;
  // Log coefficients of the derivative polynomials (Gumbel and Frank), row k
  // holds degrees 0..k.
  std::vector<std::vector<double>> log_coef_;
};

}  // namespace sumdens
