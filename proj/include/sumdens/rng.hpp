#pragma once

#include <cstdint>
#include <random>

namespace sumdens {

/// A deterministic random substream addressed by (seed, stream, index).
/// Work is split into indexed blocks that each own one RandomStream, so
/// results never depend on how blocks are scheduled across threads.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

  /// Uniform on the open interval (0,1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double exponential();
  double normal();
  double gamma(double shape);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stream identifiers, kept distinct so different consumers of one master seed
// never share random numbers.
namespace streams {
inline constexpr std::uint64_t kReplicates = 1;
inline constexpr std::uint64_t kSequentialU = 2;
inline constexpr std::uint64_t kRedraw = 3;
inline constexpr std::uint64_t kPrepass = 4;
inline constexpr std::uint64_t kMetropolis = 5;
inline constexpr std::uint64_t kTest = 99;
}  // namespace streams

}  // namespace sumdens
