#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace advrc::rng {

// SplitMix64 step; used as the mixing primitive for sub-seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Sub-seeds are derived by hashing a fixed label (and optional indices) into
// the root seed, so adding a new consumer never perturbs existing streams.
inline std::uint64_t derive(std::uint64_t seed, std::string_view label) {
  std::uint64_t s = seed ^ fnv1a(label);
  return splitmix64(s);
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  std::uint64_t s = derive(seed, label) ^ (0x9e3779b97f4a7c15ULL * (index + 1));
  return splitmix64(s);
}

inline std::uint64_t derive(std::uint64_t seed, std::string_view label, std::uint64_t i,
                            std::uint64_t j) {
  return derive(derive(seed, label, i), label, j);
}

// Deterministic per-task engine; every consumer constructs its own from a
// derived key, which keeps streams independent of scheduling.
class Engine {
 public:
  explicit Engine(std::uint64_t key) : gen_(key) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }
  double gamma(double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(gen_);
  }
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  // Rademacher sign.
  double sign() { return (gen_() & 1ULL) ? 1.0 : -1.0; }

  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace advrc::rng
