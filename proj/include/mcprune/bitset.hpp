#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <vector>

namespace mcprune {

// Fixed-capacity bitset sized at runtime. The clique search spends nearly
// all of its time in intersect/count over these, so the word array is kept
// flat and the hot operations branch-free.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int capacity() const { return nbits_; }

  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  void fill_first(int k) {  // set bits 0..k-1
    for (int i = 0; i < k; ++i) set(i);
  }

  bool any() const {
    for (uint64_t x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  int count() const {
    int c = 0;
    for (uint64_t x : w_) c += std::popcount(x);
    return c;
  }

  int find_first() const {  // -1 if empty
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i]) return static_cast<int>(i * 64 + std::countr_zero(w_[i]));
    return -1;
  }

  Bitset& operator&=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }

  Bitset& operator|=(const Bitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  void and_not(const Bitset& o) {  // *this &= ~o
    for (size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
  }

  // dst = a & b without allocating
  static void intersect(const Bitset& a, const Bitset& b, Bitset& dst) {
    for (size_t i = 0; i < a.w_.size(); ++i) dst.w_[i] = a.w_[i] & b.w_[i];
  }

  int intersect_count(const Bitset& o) const {
    int c = 0;
    for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }

  template <class F>
  void for_each(F f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t x = w_[i];
      while (x) {
        f(static_cast<int>(i * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }

  bool operator==(const Bitset& o) const { return w_ == o.w_; }

 private:
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

}  // namespace mcprune
