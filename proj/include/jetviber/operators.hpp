#pragma once

#include <map>

#include "jetviber/context.hpp"
#include "jetviber/diff_poly.hpp"

namespace jetviber {

/// Parity of the argument an operator acts on.
enum class Slot { U, P };

/// C-differential operator sum_sigma a_sigma D_sigma with polynomial
/// coefficients. Zero coefficients are never stored.
class CDiffOp {
 public:
  using TermMap = std::map<MultiIndex, DiffPoly>;

  explicit CDiffOp(Slot slot = Slot::P) : slot_(slot) {}

  static CDiffOp identity(Slot slot = Slot::P);
  static CDiffOp derivative(const MultiIndex& sigma, Slot slot = Slot::P);
  static CDiffOp multiplication(const DiffPoly& a, Slot slot = Slot::P);

  Slot slot() const { return slot_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Highest |sigma| with a nonzero coefficient, -1 for the zero operator.
  int order() const;
  /// Coefficient of D_sigma (zero when absent).
  DiffPoly coefficient(const MultiIndex& sigma) const;

  void add(const MultiIndex& sigma, const DiffPoly& a);

  CDiffOp& operator+=(const CDiffOp& o);
  CDiffOp& operator*=(const Rational& c);
  friend CDiffOp operator+(CDiffOp a, const CDiffOp& b) { return a += b; }
  friend CDiffOp operator-(CDiffOp a, const CDiffOp& b) { return a += b * Rational(-1); }
  friend CDiffOp operator*(CDiffOp a, const Rational& c) { return a *= c; }

  bool operator==(const CDiffOp& o) const { return slot_ == o.slot_ && terms_ == o.terms_; }

 private:
  Slot slot_;
  TermMap terms_;
};

/// Bi-differential operator in total derivatives with the second slot kept
/// applied: nabla(q, p) = sum_tau D_tau(q) * A_tau, where A_tau = A_tau(p) is
/// a polynomial. The first slot factor always stands to the left.
class BiDiffOp {
 public:
  using TermMap = std::map<MultiIndex, DiffPoly>;

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  DiffPoly component(const MultiIndex& tau) const;
  void add(const MultiIndex& tau, const DiffPoly& a);

  bool operator==(const BiDiffOp&) const = default;

 private:
  TermMap terms_;
};

/// sum_sigma a_sigma * D_sigma(q). Throws ParityError when q's parity does
/// not match the slot.
DiffPoly op_apply(const CDiffOp& op, const DiffPoly& q, const Context& ctx);

/// Operator composition a o b, with apply(a o b, q) = apply(a, apply(b, q)).
CDiffOp op_compose(const CDiffOp& a, const CDiffOp& b, const Context& ctx);

/// Formal adjoint: (a D_sigma)* = (-1)^|sigma| D_sigma o a. Coefficients
/// must be even.
CDiffOp op_adjoint(const CDiffOp& op, const Context& ctx);

/// Inverse of `op_apply(., p[])`: sum h_sigma p_sigma -> sum h_sigma D_sigma.
/// Throws Error if some term is not linear in p.
CDiffOp op_from_p_linear(const DiffPoly& e);

/// nabla(q, .) evaluated: sum_tau D_tau(q) * A_tau.
DiffPoly biop_apply(const BiDiffOp& nabla, const DiffPoly& q, const Context& ctx);

/// Adjoint in the first argument:
/// nabla^{*1}(q, p) = sum_tau (-1)^|tau| D_tau(q * A_tau), re-expanded as
/// sum_rho D_rho(q) * B_rho.
BiDiffOp biop_adjoint_first(const BiDiffOp& nabla, const Context& ctx);

}  // namespace jetviber
