#pragma once

#include "bitbound/nat.hpp"

#include <algorithm>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <vector>

namespace bitbound {

/// Finite set of naturals, stored as a sorted element list. Iteration is in
/// increasing order; all operations are value-semantic.
class NatSet {
 public:
  NatSet() = default;
  NatSet(std::initializer_list<Nat> xs) : elems_(xs) { normalize(); }
  explicit NatSet(std::vector<Nat> xs) : elems_(std::move(xs)) { normalize(); }

  bool contains(const Nat& x) const {
    return std::binary_search(elems_.begin(), elems_.end(), x);
  }

  void insert(const Nat& x) {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it == elems_.end() || *it != x) elems_.insert(it, x);
  }

  void erase(const Nat& x) {
    auto it = std::lower_bound(elems_.begin(), elems_.end(), x);
    if (it != elems_.end() && *it == x) elems_.erase(it);
  }

  /// Flips membership of x.
  void toggle(const Nat& x) {
    if (contains(x)) erase(x); else insert(x);
  }

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  const std::vector<Nat>& elements() const { return elems_; }

  /// Largest element; 0 for the empty set.
  Nat max_element() const { return elems_.empty() ? Nat(0) : elems_.back(); }

  bool operator==(const NatSet& o) const = default;

  /// Y_i = { v | <i,v> in Y }.
  NatSet slice(const Nat& i) const {
    NatSet out;
    for (const Nat& e : elems_) {
      auto [a, b] = unpair(e);
      if (a == i) out.elems_.push_back(b);  // unpair preserves order within a slice
    }
    std::sort(out.elems_.begin(), out.elems_.end());
    return out;
  }

  /// All first components appearing in pair-coded elements.
  std::vector<Nat> slice_indices() const {
    std::vector<Nat> idx;
    for (const Nat& e : elems_) idx.push_back(unpair(e).first);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
  }

  /// Dump format: one decimal element per line, ascending.
  void dump(std::ostream& os) const {
    for (const Nat& e : elems_) os << e << "\n";
  }

  static NatSet parse(std::istream& is) {
    NatSet s;
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line[0] == '#') continue;
      s.elems_.emplace_back(line);
    }
    s.normalize();
    return s;
  }

 private:
  void normalize() {
    std::sort(elems_.begin(), elems_.end());
    elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  }

  std::vector<Nat> elems_;
};

inline NatSet slice(const NatSet& y, const Nat& i) { return y.slice(i); }

}  // namespace bitbound
