#include "jetviber/schouten.hpp"

#include <map>

namespace jetviber {

Bivector::Bivector(std::string name, const DiffPoly& hu)
    : name_(std::move(name)), hu_(hu), op_(op_from_p_linear(hu)) {}

Bivector Bivector::instantiate(const Bindings& bindings, const Context& ctx) const {
  return Bivector(name_, substitute(hu_, bindings, ctx));
}

std::string BivectorCheck::failure() const {
  if (!cotangent_ok) return "l_E(H_u) does not vanish on the cotangent equation";
  if (!self_adjoint_ok) return "l_E o H differs from H* o l_E^* on the equation";
  return {};
}

DiffPoly self_adjointness_defect(const Bivector& h, const EquationModel& eq) {
  const Context& ctx = eq.ctx();
  const CDiffOp lin = linearize(eq.F(), ctx, Slot::P);
  const DiffPoly lhs = op_apply(lin, h.hu(), ctx);
  // H*(q) = sum (-1)^|s| D_s(a_s q), at q = l_F^*(p)
  const DiffPoly lp = op_apply(op_adjoint(lin, ctx), DiffPoly::atom(Atom::p({})), ctx);
  DiffPoly rhs;
  for (const auto& [sigma, a] : h.op().terms()) {
    const DiffPoly d = total_derivative(a * lp, sigma, ctx);
    if (sigma.order() % 2 == 0)
      rhs += d;
    else
      rhs -= d;
  }
  return lhs - rhs;
}

BivectorCheck check_bivector(const Bivector& h, const EquationModel& eq) {
  BivectorCheck out;
  const CDiffOp lin = linearize(eq.F(), eq.ctx(), Slot::P);
  out.cotangent_residual = reduce(op_apply(lin, h.hu(), eq.ctx()), eq, Shell::TStarE);
  out.cotangent_ok = out.cotangent_residual.is_zero();

  const DiffPoly theta = self_adjointness_defect(h, eq);
  FSplit split = split_on_F(theta, eq);
  out.self_adjoint_residual = split.residual;
  out.self_adjoint_ok = split.residual.is_zero();
  if (out.self_adjoint_ok) out.nabla = decompose_on_F(theta, eq, /*allow_nonlinear=*/true);
  return out;
}

DiffPoly adjoint_at_p(const BiDiffOp& nabla, const Context& ctx) {
  return biop_apply(biop_adjoint_first(nabla, ctx), DiffPoly::atom(Atom::p({})), ctx);
}

GeneratingSection generating_section(const Bivector& h, const BivectorCheck& check, const EquationModel& eq) {
  if (!check.ok()) throw NotABivector(check);
  GeneratingSection phi;
  phi.phi_u = h.hu();
  phi.phi_p = reduce(adjoint_at_p(*check.nabla, eq.ctx()) * Rational(-1, 2), eq, Shell::TStarE);
  return phi;
}

GeneratingSection generating_section(const Bivector& h, const EquationModel& eq) {
  return generating_section(h, check_bivector(h, eq), eq);
}

DiffPoly evolutionary_apply(const GeneratingSection& phi, const DiffPoly& e, const Context& ctx) {
  DiffPoly r;
  if (!phi.phi_u.is_zero()) {
    for (const auto& s : u_dependencies(e, ctx)) {
      const DiffPoly de = partial_derivative(e, Atom::u(s), ctx);
      if (de.is_zero()) continue;
      r += total_derivative(phi.phi_u, s, ctx) * de;
    }
  }
  if (!phi.phi_p.is_zero()) {
    for (const auto& s : p_dependencies(e)) {
      const DiffPoly de = partial_derivative(e, Atom::p(s), ctx);
      if (de.is_zero()) continue;
      r += total_derivative(phi.phi_p, s, ctx) * de;
    }
  }
  return r;
}

DiffPoly schouten_bracket(const Bivector& h1, const GeneratingSection& phi1, const Bivector& h2,
                          const GeneratingSection& phi2, const EquationModel& eq) {
  const Context& ctx = eq.ctx();
  DiffPoly r = evolutionary_apply(phi1, h2.hu(), ctx) + evolutionary_apply(phi2, h1.hu(), ctx);
  return reduce(r, eq, Shell::TStarE);
}

DiffPoly schouten_bracket(const Bivector& h1, const Bivector& h2, const EquationModel& eq) {
  const GeneratingSection phi1 = generating_section(h1, eq);
  const GeneratingSection phi2 = &h1 == &h2 ? phi1 : generating_section(h2, eq);
  return schouten_bracket(h1, phi1, h2, phi2, eq);
}

PoissonResult is_poisson(const Bivector& h, const EquationModel& eq) {
  PoissonResult r;
  r.bracket = schouten_bracket(h, h, eq);
  r.poisson = r.bracket.is_zero();
  return r;
}

bool are_compatible(const Bivector& h1, const Bivector& h2, const EquationModel& eq) {
  return schouten_bracket(h1, h2, eq).is_zero();
}

bool is_cotangent_symmetry(const GeneratingSection& phi, const EquationModel& eq) {
  const Context& ctx = eq.ctx();
  if (!reduce(evolutionary_apply(phi, eq.F(), ctx), eq, Shell::TStarE).is_zero()) return false;
  return reduce(evolutionary_apply(phi, eq.p_relation(), ctx), eq, Shell::TStarE).is_zero();
}

}  // namespace jetviber
