#pragma once

#include "bitbound/circuit.hpp"
#include "bitbound/term.hpp"

#include <unordered_map>
#include <variant>

namespace bitbound {

/// Structure-sharing circuit builder: common subexpressions collapse and
/// constants fold at insertion time. Wire 0 is constant 0, wire 1 constant 1.
class Builder {
 public:
  using Wire = std::uint32_t;
  using Word = std::vector<Wire>;  // little-endian wire bundle

  Builder() {
    gates_.push_back({GateOp::Const0, 0, 0});
    gates_.push_back({GateOp::Const1, 0, 0});
  }

  Wire zero() const { return 0; }
  Wire one() const { return 1; }
  Wire konst(bool b) const { return b ? 1 : 0; }

  Wire input(std::uint32_t block, std::uint32_t bit) {
    return intern(GateOp::Input, block, bit);
  }

  Wire land(Wire a, Wire b) {
    if (a == 0 || b == 0) return 0;
    if (a == 1) return b;
    if (b == 1) return a;
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    return intern(GateOp::And, a, b);
  }

  Wire lor(Wire a, Wire b) {
    if (a == 1 || b == 1) return 1;
    if (a == 0) return b;
    if (b == 0) return a;
    if (a == b) return a;
    if (a > b) std::swap(a, b);
    return intern(GateOp::Or, a, b);
  }

  Wire lnot(Wire a) {
    if (a == 0) return 1;
    if (a == 1) return 0;
    if (gates_[a].op == GateOp::Not) return gates_[a].a;
    return intern(GateOp::Not, a, 0);
  }

  Wire lxor(Wire a, Wire b) { return land(lor(a, b), lnot(land(a, b))); }
  Wire lxnor(Wire a, Wire b) { return lnot(lxor(a, b)); }
  Wire mux(Wire sel, Wire then_w, Wire else_w) {
    return lor(land(sel, then_w), land(lnot(sel), else_w));
  }

  Wire all(const std::vector<Wire>& ws) {
    Wire acc = 1;
    for (Wire w : ws) acc = land(acc, w);
    return acc;
  }
  Wire any(const std::vector<Wire>& ws) {
    Wire acc = 0;
    for (Wire w : ws) acc = lor(acc, w);
    return acc;
  }

  // ---- words ----

  Word word_const(const Nat& v, std::size_t nbits) {
    Word w(nbits);
    for (std::size_t i = 0; i < nbits; ++i) w[i] = konst(bit_of(v, i));
    return w;
  }

  Word word_input(std::uint32_t block, std::uint32_t width) {
    Word w(width);
    for (std::uint32_t i = 0; i < width; ++i) w[i] = input(block, i);
    return w;
  }

  Wire word_bit(const Word& w, std::size_t i) const { return i < w.size() ? w[i] : 0; }

  Wire eq_const(const Word& w, const Nat& v) {
    if (len(v) > w.size()) return 0;
    Wire acc = 1;
    for (std::size_t i = 0; i < w.size(); ++i)
      acc = land(acc, bit_of(v, i) ? w[i] : lnot(w[i]));
    return acc;
  }

  Wire eq_words(const Word& a, const Word& b) {
    Wire acc = 1;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) acc = land(acc, lxnor(word_bit(a, i), word_bit(b, i)));
    return acc;
  }

  /// a <= b as unsigned values.
  Wire le_words(const Word& a, const Word& b) {
    std::size_t n = std::max(a.size(), b.size());
    Wire le = 1;
    for (std::size_t i = 0; i < n; ++i) {
      Wire ai = word_bit(a, i), bi = word_bit(b, i);
      le = mux(lxor(ai, bi), lnot(ai), le);  // higher bits decide later
    }
    return le;
  }

  Wire le_const(const Word& a, const Nat& v) { return le_words(a, word_const(v, std::max(a.size(), static_cast<std::size_t>(len(v))))); }

  Word add_words(const Word& a, const Word& b) {
    std::size_t n = std::max(a.size(), b.size());
    Word out(n + 1);
    Wire carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Wire ai = word_bit(a, i), bi = word_bit(b, i);
      Wire s = lxor(lxor(ai, bi), carry);
      carry = lor(land(ai, bi), land(carry, lor(ai, bi)));
      out[i] = s;
    }
    out[n] = carry;
    return out;
  }

  /// Carry-save reduction of per-column bit lists into a plain word.
  Word compress_columns(std::vector<std::vector<Wire>> cols) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      while (cols[c].size() >= 2) {
        if (c + 1 >= cols.size()) cols.emplace_back();
        if (cols[c].size() >= 3) {
          Wire x = cols[c].back(); cols[c].pop_back();
          Wire y = cols[c].back(); cols[c].pop_back();
          Wire z = cols[c].back(); cols[c].pop_back();
          Wire xy = lxor(x, y);
          cols[c].push_back(lxor(xy, z));
          cols[c + 1].push_back(lor(land(x, y), land(z, xy)));
        } else {
          Wire x = cols[c].back(); cols[c].pop_back();
          Wire y = cols[c].back(); cols[c].pop_back();
          cols[c].push_back(lxor(x, y));
          cols[c + 1].push_back(land(x, y));
        }
      }
    }
    Word out(cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      out[c] = cols[c].empty() ? zero() : cols[c][0];
    return out;
  }

  Word mul_words(const Word& a, const Word& b) {
    std::vector<std::vector<Wire>> cols(a.size() + b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) {
        Wire p = land(a[j], b[i]);
        if (p != zero()) cols[i + j].push_back(p);
      }
    Word out = compress_columns(std::move(cols));
    out.resize(a.size() + b.size(), zero());
    return out;
  }

  /// a^2 with the symmetric partial products folded: a_i*a_j contributes once
  /// at column i+j+1 for i < j, and a_i at column 2i.
  Word square_words(const Word& a) {
    std::vector<std::vector<Wire>> cols(2 * a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != zero()) cols[2 * i].push_back(a[i]);
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        Wire p = land(a[i], a[j]);
        if (p != zero()) cols[i + j + 1].push_back(p);
      }
    }
    Word out = compress_columns(std::move(cols));
    out.resize(2 * a.size() + 1, zero());
    return out;
  }

  Word half_word(const Word& a) {
    if (a.empty()) return a;
    return Word(a.begin() + 1, a.end());
  }

  /// Cantor pairing on bundles: (s^2 + s)/2 + b with s = a + b.
  Word pair_words(const Word& a, const Word& b) {
    Word s = add_words(a, b);
    Word sq = square_words(s);
    std::vector<std::vector<Wire>> cols(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
      if (sq[i] != zero()) cols[i].push_back(sq[i]);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != zero()) cols[i].push_back(s[i]);
    Word tri = half_word(compress_columns(std::move(cols)));
    Word out = add_words(tri, b);
    return out;
  }

  /// Binary length |a| as a word.
  Word len_word(const Word& a) {
    std::size_t out_bits = len_u64(a.size()) + 1;
    Word acc = word_const(0, out_bits);
    // highest set bit wins: scan from the top, keep the first hit
    Wire seen = 0;
    for (std::size_t i = a.size(); i-- > 0;) {
      Wire here = land(a[i], lnot(seen));
      Word val = word_const(i + 1, out_bits);
      for (std::size_t j = 0; j < out_bits; ++j) acc[j] = lor(acc[j], land(here, val[j]));
      seen = lor(seen, a[i]);
    }
    return acc;
  }

  /// Compiles a resource term over word-valued arguments (no smash).
  Word term_word(const Term& t, const std::vector<Word>& args);

  std::size_t gate_count() const { return gates_.size(); }

  /// Materializes the DAG reachable from `output` as a Circuit.
  Circuit finish(std::vector<std::uint32_t> input_widths, Wire output) {
    Circuit c;
    c.input_widths = std::move(input_widths);
    std::vector<std::uint32_t> remap(gates_.size(), UINT32_MAX);
    std::vector<Wire> stack{output};
    // collect reachable gates
    std::vector<bool> need(gates_.size(), false);
    need[output] = true;
    for (std::size_t i = 0; i < stack.size(); ++i) {
      const Gate& g = gates_[stack[i]];
      if (g.op == GateOp::And || g.op == GateOp::Or || g.op == GateOp::Not) {
        if (!need[g.a]) { need[g.a] = true; stack.push_back(g.a); }
        if (g.op != GateOp::Not && !need[g.b]) { need[g.b] = true; stack.push_back(g.b); }
      }
    }
    for (std::size_t i = 0; i < gates_.size(); ++i) {
      if (!need[i]) continue;
      Gate g = gates_[i];
      if (g.op == GateOp::And || g.op == GateOp::Or) { g.a = remap[g.a]; g.b = remap[g.b]; }
      else if (g.op == GateOp::Not) g.a = remap[g.a];
      remap[i] = static_cast<std::uint32_t>(c.gates.size());
      c.gates.push_back(g);
    }
    // the output must be the final gate; double negation moves it there when
    // a shared interior gate ends the list early
    if (remap[output] != c.gates.size() - 1) {
      c.gates.push_back({GateOp::Not, remap[output], 0});
      c.gates.push_back({GateOp::Not, static_cast<std::uint32_t>(c.gates.size() - 1), 0});
    }
    return c;
  }

 private:
  Wire intern(GateOp op, std::uint32_t a, std::uint32_t b) {
    std::uint64_t key = (static_cast<std::uint64_t>(op) << 58) |
                        (static_cast<std::uint64_t>(a) << 29) | b;
    auto it = cse_.find(key);
    if (it != cse_.end()) return it->second;
    Wire w = static_cast<Wire>(gates_.size());
    gates_.push_back({op, a, b});
    cse_.emplace(key, w);
    return w;
  }

  std::vector<Gate> gates_;
  std::unordered_map<std::uint64_t, Wire> cse_;
};

inline Builder::Word Builder::term_word(const Term& t, const std::vector<Word>& args) {
  // local recursion over the term structure
  struct Rec {
    Builder& b;
    const std::vector<Word>& args;
    Word go(const Term& t) {
      using Op = Term::Op;
      switch (t.op()) {
        case Op::Const: return b.word_const(t.value(), len(t.value()));
        case Op::Var: {
          if (t.var_index() >= args.size()) throw std::invalid_argument("term_word: missing arg");
          return args[t.var_index()];
        }
        case Op::Add: return b.add_words(go(t.kid(0)), go(t.kid(1)));
        case Op::Mul: return b.mul_words(go(t.kid(0)), go(t.kid(1)));
        case Op::Half: return b.half_word(go(t.kid(0)));
        case Op::Len: return b.len_word(go(t.kid(0)));
        case Op::Smash: throw std::invalid_argument("term_word: smash not supported in circuits");
      }
      return {};
    }
  };
  return Rec{*this, args}.go(t);
}

/// Splices a circuit into a builder. Each block binds to either a constant
/// or a wire bundle (shorter bundles are zero-extended). Returns the output
/// wire.
using BlockBinding = std::variant<Nat, Builder::Word>;

inline Builder::Wire compose_into(Builder& b, const Circuit& c,
                                  const std::vector<BlockBinding>& bindings) {
  if (bindings.size() != c.input_widths.size())
    throw std::invalid_argument("compose_into: binding count mismatch");
  std::vector<Builder::Wire> val(c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.op) {
      case GateOp::Const0: val[i] = b.zero(); break;
      case GateOp::Const1: val[i] = b.one(); break;
      case GateOp::Input: {
        const BlockBinding& bind = bindings[g.a];
        if (std::holds_alternative<Nat>(bind)) {
          val[i] = b.konst(bit_of(std::get<Nat>(bind), g.b));
        } else {
          const Builder::Word& w = std::get<Builder::Word>(bind);
          val[i] = g.b < w.size() ? w[g.b] : b.zero();
        }
        break;
      }
      case GateOp::And: val[i] = b.land(val[g.a], val[g.b]); break;
      case GateOp::Or: val[i] = b.lor(val[g.a], val[g.b]); break;
      case GateOp::Not: val[i] = b.lnot(val[g.a]); break;
    }
  }
  return val.back();
}

}  // namespace bitbound
