#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tbn {

// Fixed-length bitset over dataset rows. Bits past size() are always zero so
// popcounts never need masking.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t bits, bool value = false);

  std::size_t size() const noexcept { return bits_; }
  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::size_t i, bool value) noexcept {
    const std::uint64_t bit = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= bit;
    } else {
      words_[i >> 6] &= ~bit;
    }
  }

  std::size_t count() const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitVector& operator&=(const BitVector& other) noexcept;
  // this &= ~other
  BitVector& and_not(const BitVector& other) noexcept;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

// popcount(a & b)
std::size_t count_and(const BitVector& a, const BitVector& b) noexcept;
// popcount(a & b & c)
std::size_t count_and(const BitVector& a, const BitVector& b,
                      const BitVector& c) noexcept;

}  // namespace tbn
