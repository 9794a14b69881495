#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bitbound {

/// Unbounded non-negative integer. All arithmetic is exact; operations in
/// this library never produce negative values.
using Nat = boost::multiprecision::cpp_int;

/// Binary length |x|: number of bits in x, with len(0) = 0.
inline std::uint64_t len(const Nat& x) {
  assert(x >= 0);
  if (x == 0) return 0;
  return static_cast<std::uint64_t>(boost::multiprecision::msb(x)) + 1;
}

inline Nat pow2(std::uint64_t e) {
  Nat r = 1;
  r <<= static_cast<unsigned>(e);
  return r;
}

/// Bit i of x (little-endian).
inline bool bit_of(const Nat& x, std::uint64_t i) {
  if (x == 0) return false;
  if (i > boost::multiprecision::msb(x)) return false;
  return boost::multiprecision::bit_test(x, static_cast<unsigned>(i));
}

/// Cantor pairing <x,y> = (x+y)(x+y+1)/2 + y.
/// This orientation (the "+y" form) is the library-wide convention; every
/// bound and every tuple code in the library depends on it.
inline Nat pair(const Nat& x, const Nat& y) {
  Nat s = x + y;
  return s * (s + 1) / 2 + y;
}

/// Inverse of pair(); total on all Nat.
inline std::pair<Nat, Nat> unpair(const Nat& z) {
  // s = floor((sqrt(8z+1)-1)/2) is the diagonal index.
  Nat d = 8 * z + 1;
  Nat s = (boost::multiprecision::sqrt(d) - 1) / 2;
  Nat y = z - s * (s + 1) / 2;
  return {s - y, y};
}

inline std::uint64_t to_u64(const Nat& x) {
  if (x < 0 || x > Nat(UINT64_MAX)) throw std::overflow_error("to_u64: out of range");
  return static_cast<std::uint64_t>(x);
}

inline std::uint64_t pair_u64(std::uint64_t x, std::uint64_t y) {
  std::uint64_t s = x + y;
  // Callers keep values far below the overflow threshold; the assert guards
  // against misuse in sweeps.
  assert(s < (1ull << 31));
  return s * (s + 1) / 2 + y;
}

inline std::uint64_t len_u64(std::uint64_t x) {
  std::uint64_t n = 0;
  while (x) {
    ++n;
    x >>= 1;
  }
  return n;
}

namespace detail {

struct BitWriter {
  Nat value = 0;
  std::uint64_t pos = 0;
  void put(std::uint64_t bits, unsigned width) {
    for (unsigned i = 0; i < width; ++i, ++pos)
      if ((bits >> i) & 1) boost::multiprecision::bit_set(value, static_cast<unsigned>(pos));
  }
};

struct BitReader {
  const Nat& value;
  std::uint64_t pos = 0;
  std::uint64_t end = 0;  // sentinel position
  bool ok = true;
  std::uint64_t get(unsigned width) {
    if (pos + width > end) { ok = false; return 0; }
    std::uint64_t out = 0;
    for (unsigned i = 0; i < width; ++i, ++pos)
      if (bit_of(value, pos)) out |= 1ull << i;
    return out;
  }
};

}  // namespace detail

/// Right-nested tuple code: <a1,...,ak> = pair(a1, <a2,...,ak>).
inline Nat tuple_code(const std::vector<Nat>& parts) {
  if (parts.empty()) return 0;
  Nat acc = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) acc = pair(parts[i], acc);
  return acc;
}

inline std::vector<Nat> untuple_code(const Nat& z, std::size_t k) {
  std::vector<Nat> out;
  Nat rest = z;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    auto [a, b] = unpair(rest);
    out.push_back(a);
    rest = b;
  }
  out.push_back(rest);
  return out;
}

}  // namespace bitbound
