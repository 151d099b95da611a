#pragma once

#include <cstdint>

namespace chemokin {

// Counter-based random numbers: every draw is a hash of (seed, stream,
// counter, index), so results do not depend on evaluation order or on how
// work is split across threads. The mixer is the SplitMix64 finalizer.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for one (seed, stream, counter) triple; draws are then indexed by k.
inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return mix64(mix64(seed ^ 0x5851f42d4c957f2dULL) ^ mix64(stream * 0xd1342543de82ef95ULL + counter));
}

inline std::uint64_t draw_bits(std::uint64_t key, std::uint64_t k) {
  return mix64(key + (k + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform in (0, 1].
inline double draw_open01(std::uint64_t key, std::uint64_t k) {
  return static_cast<double>((draw_bits(key, k) >> 11) + 1) * 0x1.0p-53;
}

/// Seed for the i-th point of a sweep driven by one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

}  // namespace chemokin
