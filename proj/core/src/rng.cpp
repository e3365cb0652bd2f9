#include "ancova/rng.hpp"

namespace ancova {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Stafford mix 13).
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

SplitRng SplitRng::from(std::uint64_t seed) {
  return SplitRng(mix64(seed + kGoldenGamma));
}

SplitRng SplitRng::split(std::uint64_t child_index) const {
  return SplitRng(mix64(key_ ^ mix64(child_index + kGoldenGamma)));
}

std::uint64_t SplitRng::next_u64() {
  counter_ += kGoldenGamma;
  return mix64(key_ + counter_);
}

double SplitRng::next_open01() {
  // 53-bit mantissa shifted to the open interval.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitRng::next_rademacher() {
  return (next_u64() >> 63) ? 1.0 : -1.0;
}

std::vector<int> rademacher_stream(std::uint64_t seed, std::size_t count) {
  SplitRng rng = SplitRng::from(seed);
  std::vector<int> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = rng.next_rademacher() > 0.0 ? 1 : -1;
  return out;
}

}  // namespace ancova
