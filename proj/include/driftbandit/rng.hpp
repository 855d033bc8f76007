#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace driftbandit {

using Rng = std::mt19937_64;

// Stream tags for the per-replication seed tree.
enum class Stream : std::uint64_t {
  kTrajectory = 1,
  kReward = 2,
  kDecision = 3,
  kCommonRandom = 4,
};

// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed by hashing a path of counters under a parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(parent);
  for (auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

inline std::uint64_t replication_seed(std::uint64_t master, std::uint64_t rep) {
  return derive_seed(master, {rep});
}

// Seed for a per-policy stream; `slot` is the policy's position in the config.
inline std::uint64_t stream_seed(std::uint64_t rep_seed, Stream stream,
                                 std::uint64_t slot = 0) {
  return derive_seed(rep_seed, {static_cast<std::uint64_t>(stream), slot});
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// Beta(alpha, beta) via two gamma draws. Tiny shapes can underflow both
// gammas to zero; the limiting law is then a point mass at 1 with
// probability alpha / (alpha + beta), else at 0.
inline double sample_beta(Rng& rng, double alpha, double beta) {
  const double x = std::gamma_distribution<double>(alpha, 1.0)(rng);
  const double y = std::gamma_distribution<double>(beta, 1.0)(rng);
  const double s = x + y;
  if (s > 0.0) return x / s;
  return uniform01(rng) < alpha / (alpha + beta) ? 1.0 : 0.0;
}

}  // namespace driftbandit
