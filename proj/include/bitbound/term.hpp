#pragma once

#include "bitbound/nat.hpp"

#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace bitbound {

/// Terms over the base language 0, 1, x+y, x*y, floor(x/2), x#y, |x|.
/// Used for machine resource bounds; evaluation is exact.
class Term {
 public:
  enum class Op { Const, Var, Add, Mul, Half, Smash, Len };

  static Term constant(Nat v) { return Term(Op::Const, std::move(v), 0, {}); }
  static Term var(std::size_t index = 0) { return Term(Op::Var, 0, index, {}); }

  friend Term operator+(Term a, Term b) { return Term(Op::Add, 0, 0, {std::move(a), std::move(b)}); }
  friend Term operator*(Term a, Term b) { return Term(Op::Mul, 0, 0, {std::move(a), std::move(b)}); }
  Term half() const { return Term(Op::Half, 0, 0, {*this}); }
  /// x#y = 2^(|x|*|y|).
  Term smash(Term other) const { return Term(Op::Smash, 0, 0, {*this, std::move(other)}); }
  Term length() const { return Term(Op::Len, 0, 0, {*this}); }

  Nat eval(const std::vector<Nat>& args) const {
    switch (op_) {
      case Op::Const: return value_;
      case Op::Var:
        if (var_ >= args.size()) throw std::invalid_argument("Term: missing argument");
        return args[var_];
      case Op::Add: return kids_[0].eval(args) + kids_[1].eval(args);
      case Op::Mul: return kids_[0].eval(args) * kids_[1].eval(args);
      case Op::Half: return kids_[0].eval(args) / 2;
      case Op::Smash: return pow2(len(kids_[0].eval(args)) * len(kids_[1].eval(args)));
      case Op::Len: return Nat(len(kids_[0].eval(args)));
    }
    return 0;
  }

  Nat eval1(const Nat& x) const { return eval({x}); }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  Op op() const { return op_; }
  const Nat& value() const { return value_; }
  std::size_t var_index() const { return var_; }
  const Term& kid(std::size_t i) const { return kids_[i]; }

 private:
  Term(Op op, Nat value, std::size_t var, std::vector<Term> kids)
      : op_(op), value_(std::move(value)), var_(var), kids_(std::move(kids)) {}

  void print(std::ostream& os) const {
    switch (op_) {
      case Op::Const: os << value_; break;
      case Op::Var: os << "x" << var_; break;
      case Op::Add: os << "("; kids_[0].print(os); os << "+"; kids_[1].print(os); os << ")"; break;
      case Op::Mul: os << "("; kids_[0].print(os); os << "*"; kids_[1].print(os); os << ")"; break;
      case Op::Half: os << "half("; kids_[0].print(os); os << ")"; break;
      case Op::Smash: os << "("; kids_[0].print(os); os << "#"; kids_[1].print(os); os << ")"; break;
      case Op::Len: os << "|"; kids_[0].print(os); os << "|"; break;
    }
  }

  Op op_;
  Nat value_;
  std::size_t var_ = 0;
  std::vector<Term> kids_;
};

inline Term operator+(Term a, unsigned long long c) { return std::move(a) + Term::constant(c); }
inline Term operator*(unsigned long long c, Term a) { return Term::constant(c) * std::move(a); }

/// Resource bounds a machine is witnessed by. The single-term forms fix
/// (t0,s0,q0) from one term t_M: EXP uses (t_M, t_M, t_M), PSPACE uses
/// (t_M, |t_M|, t_M), P uses (|t_M|, |t_M|, t_M).
struct WitnessTerms {
  enum class Kind { General, Exp, Pspace, Poly };

  Kind kind = Kind::Exp;
  Term t_M = Term::constant(1);          // single-term forms
  Term t0 = Term::constant(1), s0 = Term::constant(1), q0 = Term::constant(1);

  static WitnessTerms single(Kind k, Term tm) {
    WitnessTerms w;
    w.kind = k;
    w.t_M = std::move(tm);
    return w;
  }
  static WitnessTerms exp(Term tm) { return single(Kind::Exp, std::move(tm)); }
  static WitnessTerms pspace(Term tm) { return single(Kind::Pspace, std::move(tm)); }
  static WitnessTerms poly(Term tm) { return single(Kind::Poly, std::move(tm)); }
  static WitnessTerms general(Term t, Term s, Term q) {
    WitnessTerms w;
    w.kind = Kind::General;
    w.t0 = std::move(t);
    w.s0 = std::move(s);
    w.q0 = std::move(q);
    return w;
  }

  Nat time_bound(const std::vector<Nat>& xs) const {
    switch (kind) {
      case Kind::General: return t0.eval(xs);
      case Kind::Exp:
      case Kind::Pspace: return t_M.eval(xs);
      case Kind::Poly: return Nat(len(t_M.eval(xs)));
    }
    return 0;
  }
  Nat space_bound(const std::vector<Nat>& xs) const {
    switch (kind) {
      case Kind::General: return s0.eval(xs);
      case Kind::Exp: return t_M.eval(xs);
      case Kind::Pspace:
      case Kind::Poly: return Nat(len(t_M.eval(xs)));
    }
    return 0;
  }
  Nat query_bound(const std::vector<Nat>& xs) const {
    return kind == Kind::General ? q0.eval(xs) : t_M.eval(xs);
  }

  Nat time_bound1(const Nat& x) const { return time_bound({x}); }
  Nat space_bound1(const Nat& x) const { return space_bound({x}); }
  Nat query_bound1(const Nat& x) const { return query_bound({x}); }
};

}  // namespace bitbound
