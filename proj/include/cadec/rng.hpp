#pragma once
// Counter-based pseudo-random streams.  Every Monte Carlo trial derives its
// own stream from (seed, stream_id), so results are independent of worker
// count and of the order in which trials are executed.

#include <cmath>
#include <cstdint>

namespace cadec {

// SplitMix64: tiny, statistically solid generator; one instance per stream.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id) {
    // Mix seed and stream id so that nearby ids give unrelated sequences.
    state_ = seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1);
    state_ = mix_(state_ ^ (seed >> 32));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix_(state_);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t mix_(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t state_;
};

// Mask of nbits independent Bernoulli(p) bits, generated with geometric
// gap sampling (cost ~ 1 + nbits * p draws, cheap for sparse noise).
inline std::uint64_t random_bit_mask64(Rng& rng, int nbits, double p) {
  if (p <= 0.0) return 0;
  std::uint64_t full = (nbits >= 64) ? ~0ULL : ((1ULL << nbits) - 1);
  if (p >= 1.0) return full;
  const double log_q = std::log1p(-p);
  std::uint64_t m = 0;
  double pos = std::floor(std::log1p(-rng.uniform()) / log_q);
  while (pos < static_cast<double>(nbits)) {
    m |= 1ULL << static_cast<int>(pos);
    pos += 1.0 + std::floor(std::log1p(-rng.uniform()) / log_q);
  }
  return m;
}

}  // namespace cadec
