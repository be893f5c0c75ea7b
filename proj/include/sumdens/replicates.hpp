#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sumdens/joint_model.hpp"

namespace sumdens {

/// R simulated vectors X (row-major), plus the frailty Z of each row when
/// the sampler has one. One set is shared by every estimator in a run.
struct ReplicateSet {
  int n = 0;
  std::int64_t count = 0;
  std::vector<double> x;
  std::vector<double> frailty;

  std::span<const double> row(std::int64_t r) const {
    return {x.data() + r * n, static_cast<std::size_t>(n)};
  }
  bool has_frailty() const { return !frailty.empty(); }

  /// FNV-1a over the raw bytes; logged so runs can show that all methods
  /// consumed the same replicates.
  std::uint64_t hash() const;
};

/// Replicates are generated in blocks of this many rows, each block from its
/// own substream, so the output is independent of the worker count.
inline constexpr std::int64_t kReplicateBlock = 256;

/// Independence: inverse transform. Archimedean: Marshall-Olkin frailty
/// construction (frailties recorded). Gaussian: latent normal transform.
ReplicateSet simulate_replicates(const JointModel& model, std::int64_t count, std::uint64_t seed,
                                 int workers = 1);

}  // namespace sumdens
