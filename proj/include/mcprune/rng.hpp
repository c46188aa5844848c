#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcprune {

// splitmix64; used to derive independent sub-seeds so that the order in
// which pipeline phases consume randomness cannot leak between phases.
inline uint64_t mix_seed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t salt) {
  return mix_seed(base ^ mix_seed(salt));
}

// mt19937_64 is fully specified by the standard; the bounded draws below
// avoid std::uniform_int_distribution, whose output is implementation
// defined. Everything downstream is therefore reproducible across
// platforms, not just across runs.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  // uniform in [0, bound), bound > 0
  uint64_t below(uint64_t bound) {
    // rejection sampling on the top bits, no modulo bias
    const uint64_t limit = bound * (UINT64_MAX / bound);
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return x / (UINT64_MAX / bound);
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  double unit() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from 0..n-1, in random order
  std::vector<int> sample(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    shuffle(pool);
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace mcprune
