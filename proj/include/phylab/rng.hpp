#ifndef PHYLAB_RNG_HPP
#define PHYLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace phylab {

// Deterministic PRNG: xoshiro256++ seeded through SplitMix64, with Box-Muller
// normals. We avoid <random> distributions because their outputs are
// implementation-defined, which would break bit-reproducibility of runs.
//
// Independent streams for parallel Monte-Carlo work are derived statelessly
// from (seed, id0, id1, id2) -- each (sweep point, trial chunk) hashes to its
// own generator, so results are identical for any worker count.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) { reseed(seed); }

  void reseed(uint64_t seed) {
    uint64_t x = seed;
    for (auto& w : s_) {
      x += 0x9e3779b97f4a7c15ULL;
      w = mix64(x);
    }
    spare_valid_ = false;
  }

  // Derive an independent stream keyed by (seed, a, b, c).
  static Rng stream(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
    h = mix64(h ^ mix64(a + 0x9e3779b97f4a7c15ULL));
    h = mix64(h ^ mix64(b + 0x6a09e667f3bcc909ULL));
    h = mix64(h ^ mix64(c + 0xbb67ae8584caa73bULL));
    return Rng(h);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Unbiased integer in [0, n).
  uint64_t below(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second draw of each pair is cached.
  double normal() {
    if (spare_valid_) {
      spare_valid_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    spare_valid_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  static constexpr uint64_t rotl(uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  // SplitMix64 finalizer.
  static constexpr uint64_t mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t s_[4];
  bool spare_valid_ = false;
  double spare_ = 0.0;
};

}  // namespace phylab

#endif  // PHYLAB_RNG_HPP
