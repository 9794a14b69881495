#pragma once

#include <cstdint>
#include <vector>

namespace bitbound {

/// Fixed-size bit vector backed by 64-bit words.
class DenseBits {
 public:
  DenseBits() = default;
  explicit DenseBits(std::uint64_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::uint64_t size() const { return n_; }

  bool get(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  void set(std::uint64_t i, bool v = true) {
    if (v) words_[i >> 6] |= 1ull << (i & 63);
    else words_[i >> 6] &= ~(1ull << (i & 63));
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return c;
  }

  bool operator==(const DenseBits&) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bitbound
