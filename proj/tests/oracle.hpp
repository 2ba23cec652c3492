#pragma once

#include "jetviber/schouten.hpp"

namespace jetviber::oracle {

inline DiffPoly signed_derivative(const DiffPoly& e, const MultiIndex& s, const Context& ctx) {
  const DiffPoly d = total_derivative(e, s, ctx);
  return s.order() % 2 ? -d : d;
}

// l_F applied to q by summing dF/du_s * D_s(q) over the jets of F.
inline DiffPoly linearization(const DiffPoly& F, const DiffPoly& q, const Context& ctx) {
  DiffPoly r;
  for (const auto& s : u_dependencies(F, ctx)) r += partial_derivative(F, Atom::u(s), ctx) * total_derivative(q, s, ctx);
  return r;
}

// l_F^*(q) = sum (-1)^|s| D_s(dF/du_s q).
inline DiffPoly linearization_adjoint(const DiffPoly& F, const DiffPoly& q, const Context& ctx) {
  DiffPoly r;
  for (const auto& s : u_dependencies(F, ctx)) r += signed_derivative(partial_derivative(F, Atom::u(s), ctx) * q, s, ctx);
  return r;
}

// Coefficient of p_s in a p-linear expression, with the p factor taken off on the right.
inline std::map<MultiIndex, DiffPoly> p_coefficients(const DiffPoly& hu) {
  std::map<MultiIndex, DiffPoly> c;
  for (const auto& [m, k] : hu) {
    Monomial even = m;
    even.odd.clear();
    c[m.odd.at(0)] += DiffPoly::monomial(even, k);
  }
  return c;
}

// l_F(H(p)) - H*(l_F^*(p)) with H* written out by integration by parts.
inline DiffPoly defect(const DiffPoly& hu, const EquationModel& eq) {
  const Context& ctx = eq.ctx();
  const DiffPoly p = DiffPoly::atom(Atom::p({}));
  const DiffPoly lstar = linearization_adjoint(eq.F(), p, ctx);
  DiffPoly r = linearization(eq.F(), hu, ctx);
  for (const auto& [s, a] : p_coefficients(hu)) r -= signed_derivative(a * lstar, s, ctx);
  return r;
}

// Both bivector conditions, checked on the shells only through reduce.
inline bool is_bivector(const DiffPoly& hu, const EquationModel& eq) {
  const DiffPoly c2 = reduce(linearization(eq.F(), hu, eq.ctx()), eq, Shell::TStarE);
  const DiffPoly c3 = reduce(defect(hu, eq), eq, Shell::E);
  return c2.is_zero() && c3.is_zero();
}

// Ev_phi(e), section factor on the left.
inline DiffPoly ev(const DiffPoly& phi_u, const DiffPoly& phi_p, const DiffPoly& e, const Context& ctx) {
  DiffPoly r;
  for (const auto& s : u_dependencies(e, ctx))
    r += total_derivative(phi_u, s, ctx) * partial_derivative(e, Atom::u(s), ctx);
  for (const auto& s : p_dependencies(e))
    r += total_derivative(phi_p, s, ctx) * partial_derivative(e, Atom::p(s), ctx);
  return r;
}

// Euler operator in u. Vanishes exactly on total divergences.
inline DiffPoly euler_u(const DiffPoly& e, const Context& ctx) {
  DiffPoly r;
  for (const auto& s : u_dependencies(e, ctx)) r += signed_derivative(partial_derivative(e, Atom::u(s), ctx), s, ctx);
  return r;
}

}  // namespace jetviber::oracle
