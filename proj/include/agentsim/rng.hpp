#pragma once

// Counter-based random streams. Every draw is a pure function of
// (seed, stream tag, path, step, agent, sub-index), so path p produces the
// same numbers no matter how many paths a run requests, and replays are
// bitwise identical. Words are folded through the SplitMix64 finalizer.

#include <cstdint>
#include <cmath>

namespace agentsim {
namespace rng {

inline constexpr std::uint64_t kInitialStateTag = 0x696e6974ull;  // "init"
inline constexpr std::uint64_t kIncrementTag = 0x6272776eull;     // "brwn"

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t hash_key(std::uint64_t seed, std::uint64_t tag,
                                        std::uint64_t path, std::uint64_t step,
                                        std::uint64_t agent, std::uint64_t sub) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ tag);
  h = mix64(h ^ path);
  h = mix64(h ^ step);
  h = mix64(h ^ agent);
  h = mix64(h ^ sub);
  return h;
}

/// Map 64 random bits to the open interval (0, 1).
inline double to_open01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t tag, std::uint64_t path,
                        std::uint64_t step, std::uint64_t agent,
                        std::uint64_t sub = 0) {
  return to_open01(hash_key(seed, tag, path, step, agent, sub));
}

/// Standard normal draw (Box-Muller, cosine branch, two sub-draws).
inline double normal(std::uint64_t seed, std::uint64_t tag, std::uint64_t path,
                     std::uint64_t step, std::uint64_t agent) {
  const double u1 = uniform01(seed, tag, path, step, agent, 0);
  const double u2 = uniform01(seed, tag, path, step, agent, 1);
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

} // namespace rng
} // namespace agentsim
