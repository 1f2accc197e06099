#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace chroma {

// Word-level helpers shared by Graph rows and Bitset. Rows are spans of
// 64-bit words, least significant bit first.
namespace bits {

inline constexpr std::size_t words_for(int nbits) {
  return (static_cast<std::size_t>(nbits) + 63) / 64;
}

inline bool test(std::span<const std::uint64_t> w, int i) {
  return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
}

inline void set(std::span<std::uint64_t> w, int i) {
  w[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63);
}

inline void reset(std::span<std::uint64_t> w, int i) {
  w[static_cast<std::size_t>(i) >> 6] &= ~(std::uint64_t{1} << (i & 63));
}

inline void or_into(std::span<std::uint64_t> dst,
                    std::span<const std::uint64_t> src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] |= src[k];
}

inline void and_into(std::span<std::uint64_t> dst,
                     std::span<const std::uint64_t> src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] &= src[k];
}

inline void and_not_into(std::span<std::uint64_t> dst,
                         std::span<const std::uint64_t> src) {
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] &= ~src[k];
}

inline int count(std::span<const std::uint64_t> w) {
  int c = 0;
  for (auto x : w) c += std::popcount(x);
  return c;
}

inline bool any(std::span<const std::uint64_t> w) {
  for (auto x : w)
    if (x) return true;
  return false;
}

inline bool equal(std::span<const std::uint64_t> a,
                  std::span<const std::uint64_t> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

inline bool intersects(std::span<const std::uint64_t> a,
                       std::span<const std::uint64_t> b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] & b[k]) return true;
  return false;
}

// Set bits in [lo, hi).
inline void set_range(std::span<std::uint64_t> w, int lo, int hi) {
  if (lo >= hi) return;
  std::size_t wl = static_cast<std::size_t>(lo) >> 6;
  std::size_t wh = static_cast<std::size_t>(hi - 1) >> 6;
  std::uint64_t first = ~std::uint64_t{0} << (lo & 63);
  std::uint64_t last = ~std::uint64_t{0} >> (63 - ((hi - 1) & 63));
  if (wl == wh) {
    w[wl] |= first & last;
    return;
  }
  w[wl] |= first;
  for (std::size_t k = wl + 1; k < wh; ++k) w[k] = ~std::uint64_t{0};
  w[wh] |= last;
}

// Clear bits in [lo, hi).
inline void clear_range(std::span<std::uint64_t> w, int lo, int hi) {
  if (lo >= hi) return;
  std::size_t wl = static_cast<std::size_t>(lo) >> 6;
  std::size_t wh = static_cast<std::size_t>(hi - 1) >> 6;
  std::uint64_t first = ~std::uint64_t{0} << (lo & 63);
  std::uint64_t last = ~std::uint64_t{0} >> (63 - ((hi - 1) & 63));
  if (wl == wh) {
    w[wl] &= ~(first & last);
    return;
  }
  w[wl] &= ~first;
  for (std::size_t k = wl + 1; k < wh; ++k) w[k] = 0;
  w[wh] &= ~last;
}

// Visit set bits in ascending order.
template <class F>
inline void for_each(std::span<const std::uint64_t> w, F&& f) {
  for (std::size_t k = 0; k < w.size(); ++k) {
    std::uint64_t x = w[k];
    while (x) {
      int b = std::countr_zero(x);
      f(static_cast<int>(k * 64) + b);
      x &= x - 1;
    }
  }
}

inline int first(std::span<const std::uint64_t> w) {
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k]) return static_cast<int>(k * 64) + std::countr_zero(w[k]);
  return -1;
}

}  // namespace bits

// Runtime-sized bitset. Used for solver domains, candidate sets and
// frontier masks; adjacency rows live flat inside Graph instead.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int nbits) : nbits_(nbits), w_(bits::words_for(nbits), 0) {}

  int size_bits() const { return nbits_; }
  bool test(int i) const { return bits::test(w_, i); }
  void set(int i) { bits::set(w_, i); }
  void reset(int i) { bits::reset(w_, i); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  void set_all() {
    std::fill(w_.begin(), w_.end(), ~std::uint64_t{0});
    trim();
  }

  int count() const { return bits::count(w_); }
  bool any() const { return bits::any(w_); }
  bool none() const { return !any(); }
  int first() const { return bits::first(w_); }

  void or_with(const Bitset& o) { bits::or_into(w_, o.w_); }
  void and_with(const Bitset& o) { bits::and_into(w_, o.w_); }
  void and_not(const Bitset& o) { bits::and_not_into(w_, o.w_); }
  bool intersects(const Bitset& o) const { return bits::intersects(w_, o.w_); }

  void and_with_row(std::span<const std::uint64_t> row) {
    bits::and_into(w_, row);
  }
  void and_not_row(std::span<const std::uint64_t> row) {
    bits::and_not_into(w_, row);
  }
  bool intersects_row(std::span<const std::uint64_t> row) const {
    return bits::intersects(w_, row);
  }

  template <class F>
  void for_each(F&& f) const {
    bits::for_each(std::span<const std::uint64_t>(w_), f);
  }

  bool operator==(const Bitset& o) const {
    return nbits_ == o.nbits_ && w_ == o.w_;
  }

  std::span<const std::uint64_t> words() const { return w_; }
  std::span<std::uint64_t> words() { return w_; }

 private:
  void trim() {
    int tail = nbits_ & 63;
    if (tail && !w_.empty()) w_.back() &= (~std::uint64_t{0}) >> (64 - tail);
  }

  int nbits_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace chroma
