// Keyed random streams and a deterministic parallel loop.
//
// Every random draw in the library comes from an Rng obtained by hashing
// (root_seed, stream_id, index, purpose). Replications and trajectories can
// therefore be generated in any order, on any number of workers, and still
// reproduce bit for bit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace shiftpois {

/// Root seed plus replication index.
struct SimSeed {
  std::uint64_t root_seed = 0;
  std::uint64_t stream_id = 0;

  friend bool operator==(const SimSeed&, const SimSeed&) = default;
};

/// Independent sub-streams of one (seed, index) pair.
enum class StreamPurpose : std::uint64_t {
  shift = 1,
  events = 2,
  phases = 3,
  signs = 4,
  aux = 5,
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  /// Stream for item `index` of replication `seed.stream_id`.
  static Rng keyed(SimSeed seed, std::uint64_t index,
                   StreamPurpose purpose) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_open() noexcept;

private:
  std::uint64_t s_[4];
};

/// Worker count: SHIFTPOIS_WORKERS if set and positive, else hardware threads.
unsigned default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots; the call rethrows the exception of the lowest
/// failing index after all workers finish.
void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace shiftpois
