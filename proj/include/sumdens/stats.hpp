#pragma once

#include <cstdint>
#include <span>

namespace sumdens {

struct MeanSe {
  double mean;
  double std_error;
  double variance;  // per-observation sample variance
};

/// Sample mean, (n-1)-denominator variance and iid standard error.
MeanSe mean_se(std::span<const double> v);

/// Standard error of the mean by non-overlapping batch means. Trailing
/// observations that do not fill a batch are dropped from the SE (not from
/// the mean).
MeanSe batch_means(std::span<const double> v, int batches);

double sample_mean(std::span<const double> v);
double sample_variance(std::span<const double> v);
double sample_covariance(std::span<const double> a, std::span<const double> b);

/// Quantile with linear interpolation between order statistics
/// (the common "type 7" rule). `sorted` must be ascending.
double sorted_quantile(std::span<const double> sorted, double p);

/// Trapezoidal integral of y over x.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace sumdens
