#pragma once

#include <span>
#include <vector>

#include "sumdens/archimedean.hpp"
#include "sumdens/gaussian_copula.hpp"
#include "sumdens/marginal.hpp"
#include "sumdens/rng.hpp"

namespace sumdens {

/// X_i = F_i^{-1}(phi(E_i / Z)), E_i iid Exp(1), Z the frailty (Marshall-Olkin).
/// Writes X into x and returns Z.
double sample_archimedean(const ArchimedeanFamily& family, std::span<const Marginal> marginals,
                          RandomStream& rng, std::span<double> x);

/// Same transform for fixed frailty and exponentials; exposed for tests.
void archimedean_transform(const ArchimedeanFamily& family, std::span<const Marginal> marginals,
                           double z, std::span<const double> e, std::span<double> x);

/// Frank copula sampler. theta > 0 goes through the logarithmic-series frailty,
/// theta == 0 is independence; negative theta has no frailty and is rejected.
void sample_frank_direct(double theta, std::span<const Marginal> marginals, RandomStream& rng,
                         std::span<double> x);

void sample_independent(std::span<const Marginal> marginals, RandomStream& rng,
                        std::span<double> x);

void sample_gaussian_copula(const GaussianCopula& copula, std::span<const Marginal> marginals,
                            RandomStream& rng, std::span<double> x);

}  // namespace sumdens
