#include "sumdens/rng.hpp"

#include <cmath>

#include "sumdens/normal.hpp"

namespace sumdens {

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(stream), hi(stream), lo(index), hi(index)};
  engine_.seed(seq);
}

double RandomStream::exponential() { return -std::log(uniform()); }

double RandomStream::normal() { return normal::quantile(uniform()); }

double RandomStream::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  double g = dist(engine_);
  // Tiny shapes can round a draw to exactly zero.
  while (!(g > 0.0)) g = dist(engine_);
  return g;
}

}  // namespace sumdens
