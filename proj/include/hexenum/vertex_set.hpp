#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>

namespace hexenum {

using VertexId = std::uint32_t;

/// Fixed-capacity bit-set over vertex labels. Every search structure stores
/// per-vertex neighbourhoods in these, so the operations are kept branch-free.
class VertexSet {
 public:
  static constexpr std::size_t kWords = 2;
  static constexpr std::size_t kCapacity = 64 * kWords;

  constexpr VertexSet() = default;

  static constexpr VertexSet range(std::size_t begin, std::size_t end) {
    VertexSet s;
    for (std::size_t i = begin; i < end; ++i) s.set(static_cast<VertexId>(i));
    return s;
  }

  constexpr void set(VertexId v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  constexpr void reset(VertexId v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }
  constexpr bool test(VertexId v) const { return (words_[v >> 6] >> (v & 63)) & 1U; }
  constexpr void clear() { words_ = {}; }

  constexpr std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  constexpr bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  constexpr bool singleton() const { return count() == 1; }

  /// Smallest member; undefined on an empty set.
  constexpr VertexId first() const {
    for (std::size_t i = 0; i < kWords; ++i)
      if (words_[i]) return static_cast<VertexId>(64 * i + std::countr_zero(words_[i]));
    return static_cast<VertexId>(kCapacity);
  }

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::size_t i = 0; i < kWords; ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(static_cast<VertexId>(64 * i + std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  constexpr VertexSet operator|(const VertexSet& o) const {
    VertexSet r;
    for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = words_[i] | o.words_[i];
    return r;
  }
  constexpr VertexSet operator&(const VertexSet& o) const {
    VertexSet r;
    for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = words_[i] & o.words_[i];
    return r;
  }
  constexpr VertexSet operator~() const {
    VertexSet r;
    for (std::size_t i = 0; i < kWords; ++i) r.words_[i] = ~words_[i];
    return r;
  }
  constexpr VertexSet& operator|=(const VertexSet& o) { return *this = *this | o; }
  constexpr VertexSet& operator&=(const VertexSet& o) { return *this = *this & o; }
  constexpr bool operator==(const VertexSet&) const = default;

  constexpr std::uint64_t word(std::size_t i) const { return words_[i]; }

 private:
  std::array<std::uint64_t, kWords> words_{};
};

}  // namespace hexenum
