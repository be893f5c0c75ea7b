#pragma once

// Standard normal kernels shared by the marginals, the Gaussian copula and the
// sequential estimator. Everything that can underflow has a log-space variant.

namespace sumdens::normal {

inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_pdf(double x);
double pdf(double x);

/// Phi(x), accurate in both tails (erfc based).
double cdf(double x);

/// log Phi(x); finite for every finite x, including x far below -38 where
/// Phi itself underflows.
double log_cdf(double x);

/// Inverse of Phi on (0,1). Wichura's AS241 (PPND16), relative accuracy
/// about 1e-16.
double quantile(double p);

/// Inverse of Phi given log p, log p in (-inf, 0). Works for probabilities
/// far below the smallest double.
double quantile_from_log(double log_p);

}  // namespace sumdens::normal
