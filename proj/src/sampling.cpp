#include "sumdens/sampling.hpp"

#include <cmath>

#include "sumdens/error.hpp"
#include "sumdens/normal.hpp"

namespace sumdens {

namespace {

// F^{-1}(u) given log u, choosing the tail that keeps full precision.
double quantile_from_log_u(const Marginal& m, double log_u) {
  const double u = std::exp(log_u);
  if (u == 0.0) return m.from_normal_score(normal::quantile_from_log(log_u));
  if (u <= 0.5) return m.quantile(u);
  const double ubar = -std::expm1(log_u);
  if (ubar == 0.0) return m.from_normal_score(normal::quantile_from_log(log_u));
  return m.quantile_upper(ubar);
}

void check_sizes(std::span<const Marginal> marginals, std::span<double> x) {
  if (marginals.empty() || x.size() != marginals.size())
    throw_invalid("output size must match the number of marginals");
}

}  // namespace

void archimedean_transform(const ArchimedeanFamily& family, std::span<const Marginal> marginals,
                           double z, std::span<const double> e, std::span<double> x) {
  for (std::size_t i = 0; i < marginals.size(); ++i)
    x[i] = quantile_from_log_u(marginals[i], family.log_phi(e[i] / z));
}

double sample_archimedean(const ArchimedeanFamily& family, std::span<const Marginal> marginals,
                          RandomStream& rng, std::span<double> x) {
  check_sizes(marginals, x);
  const double z = family.sample_frailty(rng);
  for (std::size_t i = 0; i < marginals.size(); ++i)
    x[i] = quantile_from_log_u(marginals[i], family.log_phi(rng.exponential() / z));
  return z;
}

void sample_frank_direct(double theta, std::span<const Marginal> marginals, RandomStream& rng,
                         std::span<double> x) {
  if (theta == 0.0) {
    sample_independent(marginals, rng, x);
    return;
  }
  if (!(theta > 0.0))
    throw_capability("Frank copula with theta < 0 has no frailty representation");
  sample_archimedean(ArchimedeanFamily::frank(theta), marginals, rng, x);
}

void sample_independent(std::span<const Marginal> marginals, RandomStream& rng,
                        std::span<double> x) {
  check_sizes(marginals, x);
  for (std::size_t i = 0; i < marginals.size(); ++i) x[i] = marginals[i].quantile(rng.uniform());
}

void sample_gaussian_copula(const GaussianCopula& copula, std::span<const Marginal> marginals,
                            RandomStream& rng, std::span<double> x) {
  check_sizes(marginals, x);
  if (static_cast<int>(marginals.size()) != copula.dim())
    throw_invalid("copula dimension does not match the number of marginals");
  copula.sample_latent(rng, x);
  for (std::size_t i = 0; i < marginals.size(); ++i) x[i] = marginals[i].from_normal_score(x[i]);
}

}  // namespace sumdens
