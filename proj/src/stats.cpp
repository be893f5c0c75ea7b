#include "sumdens/stats.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sumdens/error.hpp"

namespace sumdens {

double sample_mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw_invalid("covariance of vectors with different lengths");
  if (a.size() < 2) return 0.0;
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - ma) * (b[i] - mb);
  return acc / static_cast<double>(a.size() - 1);
}

double sample_variance(std::span<const double> v) { return sample_covariance(v, v); }

MeanSe mean_se(std::span<const double> v) {
  const double m = sample_mean(v);
  const double var = sample_variance(v);
  return {m, std::sqrt(var / static_cast<double>(v.size())), var};
}

MeanSe batch_means(std::span<const double> v, int batches) {
  if (batches < 2) throw_invalid("batch means needs at least two batches");
  const auto len = static_cast<std::int64_t>(v.size()) / batches;
  if (len < 1) throw_invalid("too few observations for the requested number of batches");
  const double m = sample_mean(v);
  std::vector<double> bm(batches);
  for (int b = 0; b < batches; ++b) bm[b] = sample_mean(v.subspan(b * len, len));
  const double center = sample_mean(bm);
  double acc = 0.0;
  for (double x : bm) acc += (x - center) * (x - center);
  const double var_batch = acc / (batches - 1);
  // var_batch estimates Var(batch mean) = sigma^2_asym / len.
  const double se = std::sqrt(var_batch / batches);
  return {m, se, var_batch * static_cast<double>(len)};
}

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw_invalid("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw_invalid("trapezoid: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

}  // namespace sumdens
