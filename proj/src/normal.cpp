#include "sumdens/normal.hpp"

#include <cmath>
#include <limits>

namespace sumdens::normal {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Tail branch of AS241 driven by r = sqrt(-log(min(p, 1-p))).
double ppnd16_tail(double r) {
  if (r <= 5.0) {
    r -= 1.6;
    return (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
               3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
             4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
           (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
               6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
             2.05319162663775882187e0) * r + 1.0);
  }
  r -= 5.0;
  return (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
               1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
             2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
           5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
         (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
               1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
             1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
           5.99832206555887937690e-1) * r + 1.0);
}

double ppnd16_central(double q) {
  const double r = 0.180625 - q * q;
  return q *
         (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
               6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
             1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
           1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
         (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
               3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
             5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
           4.2313330701600911252e+1) * r + 1.0);
}

}  // namespace

double log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double pdf(double x) { return std::exp(log_pdf(x)); }

double cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double log_cdf(double x) {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  if (x > -30.0) return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  // Asymptotic series of the Mills ratio; at x <= -30 eight terms reach
  // double precision.
  const double x2 = 1.0 / (x * x);
  double term = 1.0;
  double series = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * x2;
    series += term;
  }
  return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(series);
}

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) return ppnd16_central(q);
  const double tail = q < 0.0 ? p : 1.0 - p;
  const double val = ppnd16_tail(std::sqrt(-std::log(tail)));
  return q < 0.0 ? -val : val;
}

double quantile_from_log(double log_p) {
  if (!(log_p < 0.0)) {
    if (log_p == 0.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (log_p == -std::numeric_limits<double>::infinity())
    return -std::numeric_limits<double>::infinity();
  const double p = std::exp(log_p);
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) return ppnd16_central(q);
  if (q > 0.0) return ppnd16_tail(std::sqrt(-std::log(-std::expm1(log_p))));
  double z = -ppnd16_tail(std::sqrt(-log_p));
  if (log_p < -680.0) {
    // Below ~1e-300 the rational fit is extrapolated; polish with Newton
    // steps on log Phi.
    for (int it = 0; it < 3; ++it) {
      const double lc = log_cdf(z);
      z -= (lc - log_p) * std::exp(lc - log_pdf(z));
    }
  }
  return z;
}

}  // namespace sumdens::normal
