#pragma once

#include <array>
#include <cstdint>

namespace dephasim {

/// Identifies one reproducible random stream. Streams with the same
/// master_seed and different stream_index are statistically independent;
/// an identical (master_seed, stream_index) pair replays the exact same
/// sequence regardless of thread count or scheduling.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  /// Stream for path i of a Monte Carlo run seeded by *this.
  SeedSpec substream(std::uint64_t i) const { return {master_seed, stream_index + i}; }
};

/// Counter-based generator: Philox4x32-10 (Salmon et al., SC 2011).
/// Key = master_seed, counter = (draw block, stream_index). Every output
/// is a pure function of (seed, stream, position), so streams can be
/// consumed in parallel with no shared state.
class RandomStream {
 public:
  explicit RandomStream(SeedSpec seed);

  std::uint64_t next_u64();

  /// Uniform on (0, 1), strictly inside the open interval (53-bit grid).
  double uniform01();

  /// Standard normal via a 256-layer ziggurat (see docs in rng.cpp).
  double normal();

  /// Fill len normals; identical to calling normal() len times.
  void fill_normal(double* out, std::size_t len);

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t index) const;

  std::uint32_t key01_ = 0, key23_ = 0;  // master seed split into two 32-bit keys
  std::uint64_t stream_ = 0;
  std::uint64_t block_index_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // consumed
};

}  // namespace dephasim
