#include "sumdens/replicates.hpp"

#include <cstring>

#include "sumdens/error.hpp"
#include "sumdens/parallel.hpp"
#include "sumdens/rng.hpp"
#include "sumdens/sampling.hpp"

namespace sumdens {

std::uint64_t ReplicateSet::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  mix(&n, sizeof n);
  mix(&count, sizeof count);
  mix(x.data(), x.size() * sizeof(double));
  mix(frailty.data(), frailty.size() * sizeof(double));
  return h;
}

ReplicateSet simulate_replicates(const JointModel& model, std::int64_t count, std::uint64_t seed,
                                 int workers) {
  if (count < 1) throw_invalid("replicate count must be positive");
  ReplicateSet out;
  out.n = model.dim();
  out.count = count;
  out.x.resize(static_cast<std::size_t>(count * out.n));
  const auto* fam = model.archimedean();
  if (fam) out.frailty.resize(static_cast<std::size_t>(count));
  const auto& margs = model.marginals();

  parallel_for(count, kReplicateBlock, workers, [&](std::int64_t begin, std::int64_t end) {
    RandomStream rng(seed, streams::kReplicates, static_cast<std::uint64_t>(begin / kReplicateBlock));
    for (std::int64_t r = begin; r < end; ++r) {
      std::span<double> x(out.x.data() + r * out.n, static_cast<std::size_t>(out.n));
      if (fam)
        out.frailty[r] = sample_archimedean(*fam, margs, rng, x);
      else if (const auto* g = model.gaussian())
        sample_gaussian_copula(*g, margs, rng, x);
      else
        sample_independent(margs, rng, x);
    }
  });
  return out;
}

}  // namespace sumdens
