#pragma once

// Seeded, platform-independent randomness. A Prng is identified by
// (seed, stream); identical identifiers replay identical draw sequences,
// which is what makes every Monte Carlo report in this library reproducible.
// Parallel work derives one child stream per worker.

#include <cstdint>

#include "shortcode/gf2.hpp"

namespace shortcode {

namespace detail {
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

/// xoshiro256** seeded through splitmix64 from (seed, stream).
class Prng {
 public:
  explicit Prng(uint64_t seed, uint64_t stream = 0) : seed_(seed), stream_(stream) {
    uint64_t init = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
    for (auto& word : s_) word = detail::splitmix64(init);
  }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  Prng child(uint64_t stream) const { return Prng(seed_, stream); }

  uint64_t next_u64() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// k uniform bits, 0 <= k <= 64, in the low positions.
  uint64_t bits(int k) {
    if (k == 0) return 0;
    uint64_t r = next_u64();
    return k >= 64 ? r : r & ((uint64_t{1} << k) - 1);
  }

  bool bit() { return bits(1); }

  /// Uniform in [0, bound) by masked rejection; bound > 0.
  uint64_t below(uint64_t bound) {
    if (bound <= 1) return 0;
    int k = 64 - __builtin_clzll(bound - 1);
    for (;;) {
      uint64_t r = bits(k);
      if (r < bound) return r;
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t s_[4];
  uint64_t seed_, stream_;
};

inline GF2Vector sample_vector(Prng& prng, int n) {
  GF2Vector v(n);
  for (int j = 0, k = 0; j < n; j += 64, ++k) v.set_word(k, prng.bits(std::min(64, n - j)));
  return v;
}

inline GF2Vector sample_nonzero_vector(Prng& prng, int n) {
  for (;;) {
    GF2Vector v = sample_vector(prng, n);
    if (!v.is_zero()) return v;
  }
}

inline GF2Matrix sample_matrix(Prng& prng, int rows, int cols) {
  GF2Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = sample_vector(prng, cols);
  return m;
}

inline GF2Tensor sample_tensor(Prng& prng, int l, int m, int n) {
  GF2Tensor t(l, m, n);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < n; ++k)
        if (prng.bit()) t.set(i, j, k, true);
  return t;
}

}  // namespace shortcode
