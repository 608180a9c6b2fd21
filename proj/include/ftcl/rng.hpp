#pragma once

#include <cstdint>

namespace ftcl {

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Stateless 64-bit mixer; both halves of the argument influence the output.
inline uint64_t mix64(uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  x ^= x >> 33;
  return x;
}

/// Deterministic, platform-independent pseudo-random stream.
/// std::uniform_int_distribution is not portable across standard libraries,
/// so reproducible seeds require doing the reduction by hand.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() { return splitmix64(state_); }

  /// Uniform value in [0, n) via 128-bit multiply (Lemire reduction without
  /// the rejection step; bias is < 2^-53 for the ranges used here).
  uint64_t below(uint64_t n) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  /// Bernoulli trial with success probability p.
  bool coin(double p) {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0) < p;
  }

  /// Derive an independent child stream, e.g. per phase or per round.
  Rng fork(uint64_t salt) { return Rng(mix64(state_ ^ mix64(salt ^ 0xa076'1d64'78bd'642full))); }

 private:
  uint64_t state_;
};

}  // namespace ftcl
