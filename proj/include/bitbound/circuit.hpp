#pragma once

#include "bitbound/nat.hpp"
#include "bitbound/natset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bitbound {

enum class GateOp : std::uint8_t { Const0 = 0, Const1 = 1, Input = 2, And = 3, Or = 4, Not = 5 };

struct Gate {
  GateOp op = GateOp::Const0;
  std::uint32_t a = 0, b = 0;  // operands; Input: a = block, b = bit
  bool operator==(const Gate&) const = default;
};

/// Gate-list circuit over {AND, OR, NOT, CONST}, fan-in 2. Inputs arrive as
/// tuple blocks; gate i may only reference gates below i; the last gate is
/// the output.
struct Circuit {
  std::vector<std::uint32_t> input_widths;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;

  std::uint64_t size() const { return gates.size(); }
  std::uint64_t total_input_bits() const {
    std::uint64_t n = 0;
    for (auto w : input_widths) n += w;
    return n;
  }

  std::string validate() const {
    if (gates.empty()) return "no gates";
    std::uint64_t index_space = 1ull << len_u64(gates.size());
    if (input_widths.size() > index_space) return "too many input blocks for the index width";
    for (std::uint32_t w : input_widths)
      if (w == 0) return "empty input block";
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      switch (g.op) {
        case GateOp::Const0:
        case GateOp::Const1:
          if (g.a || g.b) return "constant gate with operands";
          break;
        case GateOp::Input:
          if (g.a >= input_widths.size()) return "input block out of range";
          if (g.b >= input_widths[g.a]) return "input bit out of range";
          if (g.b >= index_space) return "input bit beyond the index width";
          break;
        case GateOp::And:
        case GateOp::Or:
          if (g.a >= i || g.b >= i) return "operand not below gate";
          break;
        case GateOp::Not:
          if (g.a >= i) return "operand not below gate";
          if (g.b) return "negation with second operand";
          break;
        default:
          return "unknown opcode";
      }
    }
    return "";
  }
};

namespace detail {

// Self-delimiting code for positive integers: len(v)-1 zeros, a one, then
// the low len(v)-1 bits of v.
inline void put_gamma(BitWriter& bw, std::uint64_t v) {
  unsigned L = static_cast<unsigned>(len_u64(v));
  bw.put(0, L - 1);
  bw.put(1, 1);
  bw.put(v & ((1ull << (L - 1)) - 1), L - 1);
}

inline std::uint64_t get_gamma(BitReader& br) {
  unsigned zeros = 0;
  while (br.ok && !br.get(1)) ++zeros;
  if (!br.ok || zeros > 62) { br.ok = false; return 0; }
  std::uint64_t low = br.get(zeros);
  return (1ull << zeros) | low;
}

}  // namespace detail

/// Canonical number code. Layout, LSB first: gamma(s), gamma(#blocks + 1),
/// gamma(width) per block, then s records [op:3][a:IW][b:IW] with
/// IW = len(s), then the sentinel bit. The code of a circuit with s gates
/// stays below 2^(10*s*len(s)); circuits that would exceed it are rejected.
inline Nat encode_circuit(const Circuit& c) {
  std::string err = c.validate();
  if (!err.empty()) throw std::invalid_argument("encode_circuit: " + err);
  detail::BitWriter bw;
  const std::uint64_t s = c.gates.size();
  const unsigned IW = static_cast<unsigned>(len_u64(s));
  detail::put_gamma(bw, s);
  detail::put_gamma(bw, c.input_widths.size() + 1);
  for (std::uint32_t w : c.input_widths) detail::put_gamma(bw, w);
  for (const Gate& g : c.gates) {
    bw.put(static_cast<std::uint64_t>(g.op), 3);
    bw.put(g.a, IW);
    bw.put(g.b, IW);
  }
  if (bw.pos + 1 > 10 * s * len_u64(s))
    throw std::length_error("encode_circuit: code would exceed the size bound");
  boost::multiprecision::bit_set(bw.value, static_cast<unsigned>(bw.pos));
  return bw.value;
}

inline std::optional<Circuit> decode_circuit(const Nat& code) {
  if (code <= 0) return std::nullopt;
  Circuit c;
  detail::BitReader br{code, 0, boost::multiprecision::msb(code)};
  std::uint64_t s = detail::get_gamma(br);
  if (!br.ok || s == 0 || s > (1ull << 26)) return std::nullopt;
  std::uint64_t nblocks = detail::get_gamma(br);
  if (!br.ok || nblocks == 0) return std::nullopt;
  nblocks -= 1;
  for (std::uint64_t i = 0; i < nblocks; ++i) {
    std::uint64_t w = detail::get_gamma(br);
    if (!br.ok || w > UINT32_MAX) return std::nullopt;
    c.input_widths.push_back(static_cast<std::uint32_t>(w));
  }
  const unsigned IW = static_cast<unsigned>(len_u64(s));
  c.gates.reserve(s);
  for (std::uint64_t i = 0; i < s; ++i) {
    Gate g;
    std::uint64_t op = br.get(3);
    if (op > 5) return std::nullopt;
    g.op = static_cast<GateOp>(op);
    g.a = static_cast<std::uint32_t>(br.get(IW));
    g.b = static_cast<std::uint32_t>(br.get(IW));
    c.gates.push_back(g);
  }
  if (!br.ok || br.pos != br.end) return std::nullopt;  // no padding allowed
  if (!c.validate().empty()) return std::nullopt;
  return c;
}

/// Evaluates with an arbitrary input-bit source.
template <typename GetBit>
inline bool eval_with(const Circuit& c, GetBit&& get) {
  std::vector<char> val(c.gates.size());
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    switch (g.op) {
      case GateOp::Const0: val[i] = 0; break;
      case GateOp::Const1: val[i] = 1; break;
      case GateOp::Input: val[i] = get(g.a, g.b) ? 1 : 0; break;
      case GateOp::And: val[i] = val[g.a] & val[g.b]; break;
      case GateOp::Or: val[i] = val[g.a] | val[g.b]; break;
      case GateOp::Not: val[i] = !val[g.a]; break;
    }
  }
  return val.back();
}

/// Tuple evaluation: 0 when the argument count differs from the block count
/// or any component is longer than its block.
inline bool eval_tuple(const Circuit& c, const std::vector<Nat>& xs) {
  if (xs.size() != c.input_widths.size()) return false;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (len(xs[i]) > c.input_widths[i]) return false;
  return eval_with(c, [&](std::uint32_t blk, std::uint32_t bit) { return bit_of(xs[blk], bit); });
}

/// Single-number evaluation: the bits of x fill the blocks in order; 0 when
/// x has more bits than the circuit has input gates.
inline bool eval_value(const Circuit& c, const Nat& x) {
  std::uint64_t W = c.total_input_bits();
  if (len(x) > W) return false;
  std::vector<std::uint64_t> offset(c.input_widths.size() + 1, 0);
  for (std::size_t i = 0; i < c.input_widths.size(); ++i)
    offset[i + 1] = offset[i] + c.input_widths[i];
  return eval_with(c, [&](std::uint32_t blk, std::uint32_t bit) {
    return bit_of(x, offset[blk] + bit);
  });
}

/// eval on number codes: non-codes and overlong inputs give 0.
inline bool eval_code(const Nat& code, const Nat& x) {
  auto c = decode_circuit(code);
  return c && eval_value(*c, x);
}

inline bool eval_code_tuple(const Nat& code, const std::vector<Nat>& xs) {
  auto c = decode_circuit(code);
  return c && eval_tuple(*c, xs);
}

/// C_x̄: fixes the first xs.size() blocks to the bits of xs. The result takes
/// the remaining blocks; its code never exceeds the original.
inline Circuit restrict_circuit(const Circuit& c, const std::vector<Nat>& xs) {
  if (xs.size() > c.input_widths.size())
    throw std::invalid_argument("restrict: more values than blocks");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (len(xs[i]) > c.input_widths[i])
      throw std::invalid_argument("restrict: value longer than its block");
  Circuit out;
  out.input_widths.assign(c.input_widths.begin() + xs.size(), c.input_widths.end());
  out.gates = c.gates;
  for (Gate& g : out.gates) {
    if (g.op != GateOp::Input) continue;
    if (g.a < xs.size()) {
      g.op = bit_of(xs[g.a], g.b) ? GateOp::Const1 : GateOp::Const0;
      g.a = g.b = 0;
    } else {
      g.a -= static_cast<std::uint32_t>(xs.size());
    }
  }
  return out;
}

/// Constant-folded view of a circuit under fixed leading blocks; evaluates
/// the remaining input bits 64 values per call. Free bits are numbered
/// block-major, low bit first, matching eval_value on the residual blocks.
class SweepEval {
 public:
  SweepEval(const Circuit& c, const std::vector<Nat>& fixed) {
    std::vector<std::uint64_t> offset(c.input_widths.size() + 1, 0);
    for (std::size_t i = 0; i < c.input_widths.size(); ++i)
      offset[i + 1] = offset[i] + c.input_widths[i];
    std::uint64_t fixed_bits = fixed.size() <= c.input_widths.size() ? offset[fixed.size()] : 0;
    free_bits_ = c.total_input_bits() - fixed_bits;

    // tags: 0 -> const0, 1 -> const1, 2k+2 -> free bit k, 2k+3 -> op k
    std::vector<std::uint64_t> tag(c.gates.size());
    auto is_c0 = [](std::uint64_t t) { return t == 0; };
    auto is_c1 = [](std::uint64_t t) { return t == 1; };
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
      const Gate& g = c.gates[i];
      switch (g.op) {
        case GateOp::Const0: tag[i] = 0; break;
        case GateOp::Const1: tag[i] = 1; break;
        case GateOp::Input: {
          if (g.a < fixed.size()) tag[i] = bit_of(fixed[g.a], g.b) ? 1 : 0;
          else tag[i] = 2 * (offset[g.a] - fixed_bits + g.b) + 2;
          break;
        }
        case GateOp::And: {
          std::uint64_t ta = tag[g.a], tb = tag[g.b];
          if (is_c0(ta) || is_c0(tb)) tag[i] = 0;
          else if (is_c1(ta)) tag[i] = tb;
          else if (is_c1(tb)) tag[i] = ta;
          else tag[i] = emit(0, ta, tb);
          break;
        }
        case GateOp::Or: {
          std::uint64_t ta = tag[g.a], tb = tag[g.b];
          if (is_c1(ta) || is_c1(tb)) tag[i] = 1;
          else if (is_c0(ta)) tag[i] = tb;
          else if (is_c0(tb)) tag[i] = ta;
          else tag[i] = emit(1, ta, tb);
          break;
        }
        case GateOp::Not: {
          std::uint64_t ta = tag[g.a];
          if (is_c0(ta)) tag[i] = 1;
          else if (is_c1(ta)) tag[i] = 0;
          else tag[i] = emit(2, ta, 0);
          break;
        }
      }
    }
    out_tag_ = tag.back();
    scratch_.resize(ops_.size());
  }

  std::uint64_t free_bits() const { return free_bits_; }
  std::uint64_t live_ops() const { return ops_.size(); }

  /// words[k] carries free-input bit k across 64 lanes.
  std::uint64_t eval64(const std::uint64_t* words) const {
    for (std::size_t i = 0; i < ops_.size(); ++i) {
      const LiveOp& o = ops_[i];
      std::uint64_t a = fetch(o.a, words);
      switch (o.kind) {
        case 0: scratch_[i] = a & fetch(o.b, words); break;
        case 1: scratch_[i] = a | fetch(o.b, words); break;
        default: scratch_[i] = ~a; break;
      }
    }
    return fetch(out_tag_, words);
  }

  /// Output bits for the 64 consecutive free values base..base+63
  /// (base must be a multiple of 64).
  std::uint64_t eval_range64(std::uint64_t base) const {
    static constexpr std::uint64_t kPattern[6] = {
        0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
        0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    thread_local std::vector<std::uint64_t> words;
    words.assign(free_bits_, 0);
    for (std::uint64_t k = 0; k < free_bits_; ++k) {
      if (k < 6) words[k] = kPattern[k];
      else if (k < 64) words[k] = (base >> k) & 1 ? ~0ull : 0ull;
    }
    return eval64(words.data());
  }

  /// Collects all accepted values below bound (bound < 2^63).
  std::vector<std::uint64_t> accepted_below(std::uint64_t bound) const {
    std::vector<std::uint64_t> hits;
    for (std::uint64_t base = 0; base < bound; base += 64) {
      std::uint64_t w = eval_range64(base);
      if (base + 64 > bound) w &= (bound - base) == 64 ? ~0ull : ((1ull << (bound - base)) - 1);
      while (w) {
        unsigned k = static_cast<unsigned>(__builtin_ctzll(w));
        hits.push_back(base + k);
        w &= w - 1;
      }
    }
    return hits;
  }

 private:
  struct LiveOp {
    std::uint8_t kind;  // 0 and, 1 or, 2 not
    std::uint64_t a, b;
  };

  std::uint64_t emit(std::uint8_t kind, std::uint64_t ta, std::uint64_t tb) {
    ops_.push_back({kind, ta, tb});
    return 2 * (ops_.size() - 1) + 3;
  }

  std::uint64_t fetch(std::uint64_t t, const std::uint64_t* words) const {
    if (t == 0) return 0;
    if (t == 1) return ~0ull;
    if (t & 1) return scratch_[(t - 3) / 2];
    std::uint64_t k = (t - 2) / 2;
    return k < free_bits_ ? words[k] : 0;  // bits past the sweep range are 0
  }

  std::uint64_t free_bits_ = 0;
  std::uint64_t out_tag_ = 0;
  std::vector<LiveOp> ops_;
  mutable std::vector<std::uint64_t> scratch_;
};

/// tt(C): the set of accepted inputs; guarded by a width limit.
inline NatSet truth_table(const Circuit& c, unsigned max_width = 24) {
  std::uint64_t W = c.total_input_bits();
  if (W > max_width) throw std::length_error("truth_table: input width beyond the guard");
  SweepEval ev(c, {});
  std::vector<Nat> elems;
  for (std::uint64_t v : ev.accepted_below(1ull << W)) elems.push_back(v);
  return NatSet(std::move(elems));
}

}  // namespace bitbound
