#include "jetviber/operators.hpp"

#include "jetviber/calculus.hpp"

namespace jetviber {

CDiffOp CDiffOp::identity(Slot slot) { return derivative(MultiIndex{}, slot); }

CDiffOp CDiffOp::derivative(const MultiIndex& sigma, Slot slot) {
  CDiffOp op(slot);
  op.add(sigma, DiffPoly(1));
  return op;
}

CDiffOp CDiffOp::multiplication(const DiffPoly& a, Slot slot) {
  CDiffOp op(slot);
  op.add(MultiIndex{}, a);
  return op;
}

int CDiffOp::order() const {
  int r = -1;
  for (const auto& [s, a] : terms_) r = std::max(r, s.order());
  return r;
}

DiffPoly CDiffOp::coefficient(const MultiIndex& sigma) const {
  auto it = terms_.find(sigma);
  return it == terms_.end() ? DiffPoly() : it->second;
}

void CDiffOp::add(const MultiIndex& sigma, const DiffPoly& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(sigma, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

CDiffOp& CDiffOp::operator+=(const CDiffOp& o) {
  for (const auto& [s, a] : o.terms_) add(s, a);
  return *this;
}

CDiffOp& CDiffOp::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [s, a] : terms_) a *= c;
  return *this;
}

DiffPoly BiDiffOp::component(const MultiIndex& tau) const {
  auto it = terms_.find(tau);
  return it == terms_.end() ? DiffPoly() : it->second;
}

void BiDiffOp::add(const MultiIndex& tau, const DiffPoly& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(tau, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffPoly op_apply(const CDiffOp& op, const DiffPoly& q, const Context& ctx) {
  const int want = op.slot() == Slot::P ? 1 : 0;
  if (!q.is_zero() && q.parity() != want)
    throw ParityError(want ? "operator on the p-slot applied to an even argument"
                           : "operator on the u-slot applied to an odd argument");
  DiffPoly r;
  for (const auto& [sigma, a] : op.terms()) r += a * total_derivative(q, sigma, ctx);
  return r;
}

CDiffOp op_compose(const CDiffOp& a, const CDiffOp& b, const Context& ctx) {
  if (a.slot() != b.slot()) throw ParityError("composing operators on different slots");
  // a_s D_s (b_t D_t) = sum_{r <= s} C(s, r) a_s D_{s-r}(b_t) D_{r+t}
  CDiffOp r(a.slot());
  for (const auto& [s, as] : a.terms())
    for (const auto& [t, bt] : b.terms())
      for_each_sub_index(s, [&](const MultiIndex& rho) {
        const DiffPoly db = total_derivative(bt, s - rho, ctx);
        if (db.is_zero()) return;
        r.add(rho + t, as * db * Rational(multi_binomial(s, rho)));
      });
  return r;
}

CDiffOp op_adjoint(const CDiffOp& op, const Context& ctx) {
  CDiffOp r(op.slot());
  for (const auto& [s, a] : op.terms()) {
    if (a.parity() != 0) throw ParityError("adjoint of an operator with odd coefficients");
    const int sign = s.order() % 2 == 0 ? 1 : -1;
    // D_s o a = sum_{r <= s} C(s, r) D_{s-r}(a) D_r
    for_each_sub_index(s, [&](const MultiIndex& rho) {
      const DiffPoly da = total_derivative(a, s - rho, ctx);
      if (da.is_zero()) return;
      r.add(rho, da * Rational(sign * multi_binomial(s, rho)));
    });
  }
  return r;
}

CDiffOp op_from_p_linear(const DiffPoly& e) {
  CDiffOp op(Slot::P);
  for (const auto& [m, c] : e) {
    if (m.odd.size() != 1) throw Error("expression is not linear in p");
    Monomial coeff = m;
    coeff.odd.clear();
    op.add(m.odd.front(), DiffPoly::monomial(std::move(coeff), c));
  }
  return op;
}

DiffPoly biop_apply(const BiDiffOp& nabla, const DiffPoly& q, const Context& ctx) {
  DiffPoly r;
  for (const auto& [tau, a] : nabla.terms()) r += total_derivative(q, tau, ctx) * a;
  return r;
}

BiDiffOp biop_adjoint_first(const BiDiffOp& nabla, const Context& ctx) {
  // (-1)^|t| D_t(q A_t) = sum_{r <= t} (-1)^|t| C(t, r) D_r(q) D_{t-r}(A_t)
  BiDiffOp r;
  for (const auto& [tau, a] : nabla.terms()) {
    const int sign = tau.order() % 2 == 0 ? 1 : -1;
    for_each_sub_index(tau, [&](const MultiIndex& rho) {
      const DiffPoly da = total_derivative(a, tau - rho, ctx);
      if (da.is_zero()) return;
      r.add(rho, da * Rational(sign * multi_binomial(tau, rho)));
    });
  }
  return r;
}

}  // namespace jetviber
