#pragma once

#include <cstdint>
#include <vector>

namespace ancova {

/// Counter-based splittable random stream.
///
/// Each stream is identified by a 64-bit key; the n-th output is a mix of
/// (key + n * golden gamma), so outputs depend only on (key, n) and never on
/// how many values other streams consumed. Child streams derive their keys
/// from the parent key and a child index, which keeps replicate-level
/// randomness independent of execution order and thread count.
class SplitRng {
 public:
  /// Root stream for a user-facing seed.
  static SplitRng from(std::uint64_t seed);

  /// Child stream for the given index; deterministic in (parent key, index).
  SplitRng split(std::uint64_t child_index) const;

  /// Key identifying this stream; usable as a derived seed.
  std::uint64_t stream_key() const { return key_; }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1); safe to feed inverse CDFs.
  double next_open01();

  /// A single Rademacher draw (+1 or -1 with equal probability).
  double next_rademacher();

 private:
  explicit SplitRng(std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Deterministic stream of `count` Rademacher values for the given seed.
/// Draw i equals SplitRng::from(seed)'s i-th Rademacher output.
std::vector<int> rademacher_stream(std::uint64_t seed, std::size_t count);

}  // namespace ancova
