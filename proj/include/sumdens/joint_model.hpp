#pragma once

#include <span>
#include <variant>
#include <vector>

#include "sumdens/archimedean.hpp"
#include "sumdens/gaussian_copula.hpp"
#include "sumdens/marginal.hpp"

namespace sumdens {

struct Independence {};

using Copula = std::variant<Independence, ArchimedeanFamily, GaussianCopula>;

/// Joint law of X: n marginals glued by a copula. Immutable; every method is
/// a pure function of its arguments.
class JointModel {
 public:
  JointModel(Copula copula, std::vector<Marginal> marginals);

  int dim() const { return static_cast<int>(marginals_.size()); }
  const std::vector<Marginal>& marginals() const { return marginals_; }
  const Copula& copula() const { return copula_; }
  const ArchimedeanFamily* archimedean() const { return std::get_if<ArchimedeanFamily>(&copula_); }
  const GaussianCopula* gaussian() const { return std::get_if<GaussianCopula>(&copula_); }
  bool independent() const { return std::holds_alternative<Independence>(copula_); }
  bool all_positive() const;

  /// log f_X(x); -inf outside the support.
  double log_density(std::span<const double> x) const;

  /// grad log f_X(x). Domain error unless x is in the support interior.
  std::vector<double> score(std::span<const double> x) const;
  void score(std::span<const double> x, std::span<double> out) const;

  /// Density of X_i given X_{-i}, evaluated at x_i = x[i]. Independence and
  /// Archimedean copulas only.
  double conditional_density(int i, std::span<const double> x) const;

  /// Same as conditional_density with the rest of the vector summarized by
  /// t_rest = sum_{j != i} psi(F_j(x_j)) (ignored under independence).
  double conditional_density_at(int i, double xi, double t_rest) const;

  /// Density of X_i given X_{-i} and the frailty Z = z (Archimedean only).
  double ext_conditional_density(int i, double xi, double z) const;

  /// psi(F_i(x_i)) with the survival-based guards used throughout.
  double psi_of(int i, double xi) const;

 private:
  void require_dim(std::span<const double> x) const;

  Copula copula_;
  std::vector<Marginal> marginals_;
};

}  // namespace sumdens
