#pragma once

#include <string>

namespace sumdens {

enum class MarginalFamily { Exponential, Weibull, Lognormal, Normal };

struct MarginalEval {
  double pdf;
  double log_pdf;
  double cdf;
  double score;  // d/dx log pdf; NaN off the support interior
};

/// Univariate marginal distribution. Parameters are validated on
/// construction, so every evaluation below is total.
class Marginal {
 public:
  static Marginal exponential(double rate);
  static Marginal weibull(double shape, double scale);
  static Marginal lognormal(double mu, double sigma);
  static Marginal normal(double mu, double sigma);

  /// Parses "exp:1", "weibull:0.3,1", "lognormal:0,1", "normal:0,1".
  static Marginal parse(const std::string& text);

  MarginalFamily family() const { return family_; }
  double param1() const { return a_; }
  double param2() const { return b_; }
  std::string describe() const;

  /// True for the families supported on (0, inf).
  bool positive() const { return family_ != MarginalFamily::Normal; }
  bool in_support(double x) const { return !positive() || x > 0.0; }

  MarginalEval eval(double x) const;

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double log_cdf(double x) const;
  /// 1 - cdf(x), without cancellation.
  double survival(double x) const;
  double score(double x) const;

  /// Inverse cdf on (0,1); anything else is a domain error.
  double quantile(double u) const;
  /// quantile(1 - q) evaluated without forming 1 - q.
  double quantile_upper(double q) const;

  /// Phi^{-1}(F(x)) and its inverse F^{-1}(Phi(z)), both computed without
  /// passing through a probability that could round to 0 or 1.
  double normal_score(double x) const;
  double from_normal_score(double z) const;

 private:
  Marginal(MarginalFamily f, double a, double b) : family_(f), a_(a), b_(b) {}

  // Exponential/Weibull cumulative hazard (x/scale)^shape.
  double hazard(double x) const;
  double from_hazard(double h) const;

  MarginalFamily family_;
  double a_;  // rate | shape | mu | mu
  double b_;  // unused | scale | sigma | sigma
};

}  // namespace sumdens
