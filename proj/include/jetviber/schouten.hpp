#pragma once

#include <optional>
#include <string>

#include "jetviber/equation.hpp"

namespace jetviber {

/// A p-slot C-differential operator H together with H_u = H(p).
class Bivector {
 public:
  Bivector(std::string name, const DiffPoly& hu);

  const std::string& name() const { return name_; }
  const CDiffOp& op() const { return op_; }
  const DiffPoly& hu() const { return hu_; }
  int jet_order() const { return op_.order(); }

  Bivector instantiate(const Bindings& bindings, const Context& ctx) const;

 private:
  std::string name_;
  DiffPoly hu_;
  CDiffOp op_;
};

/// Components (H_u, H_p) of the evolutionary super-derivation of a bivector.
struct GeneratingSection {
  DiffPoly phi_u;  // p-degree 1
  DiffPoly phi_p;  // p-degree 2
};

/// Outcome of checking the two bivector conditions. Violations are values.
struct BivectorCheck {
  bool cotangent_ok = false;     // l_E(H_u) = 0 on T*E
  bool self_adjoint_ok = false;  // l_E o H = H* o l_E^*
  DiffPoly cotangent_residual;   // reduce(l_F(H_u), T*E)
  DiffPoly self_adjoint_residual;  // reduce(theta, E)
  std::optional<BiDiffOp> nabla;   // theta = nabla(F, p), on success

  bool ok() const { return cotangent_ok && self_adjoint_ok; }
  /// Human-readable name of the first failed condition, empty when ok.
  std::string failure() const;
};

class NotABivector : public Error {
 public:
  explicit NotABivector(BivectorCheck check)
      : Error("not a bivector: " + check.failure()), check_(std::move(check)) {}
  const BivectorCheck& check() const { return check_; }

 private:
  BivectorCheck check_;
};

/// theta(p) = l_F(H(p)) - H*(l_F^*(p)) on the ambient jet space.
DiffPoly self_adjointness_defect(const Bivector& h, const EquationModel& eq);

BivectorCheck check_bivector(const Bivector& h, const EquationModel& eq);

/// (H_u, reduce(-1/2 nabla^{*1}(p, p), T*E)). Throws NotABivector.
GeneratingSection generating_section(const Bivector& h, const EquationModel& eq);
/// Same, from an already successful check.
GeneratingSection generating_section(const Bivector& h, const BivectorCheck& check, const EquationModel& eq);

/// nabla^{*1}(p, p) for a successful check.
DiffPoly adjoint_at_p(const BiDiffOp& nabla, const Context& ctx);

/// Ev_phi(e) = sum D_s(phi_u) de/du_s + sum D_s(phi_p) de/dp_s with left
/// derivatives and the section factor on the left.
DiffPoly evolutionary_apply(const GeneratingSection& phi, const DiffPoly& e, const Context& ctx);

/// [[H, H']] = Ev_phi(H)(H'_u) + Ev_phi(H')(H_u), reduced on T*E.
DiffPoly schouten_bracket(const Bivector& h1, const Bivector& h2, const EquationModel& eq);
DiffPoly schouten_bracket(const Bivector& h1, const GeneratingSection& phi1, const Bivector& h2,
                          const GeneratingSection& phi2, const EquationModel& eq);

struct PoissonResult {
  bool poisson = false;
  DiffPoly bracket;  // reduced [[H, H]]
};
PoissonResult is_poisson(const Bivector& h, const EquationModel& eq);

bool are_compatible(const Bivector& h1, const Bivector& h2, const EquationModel& eq);

/// Ev_phi(F) and Ev_phi(l(p)) both vanish on T*E.
bool is_cotangent_symmetry(const GeneratingSection& phi, const EquationModel& eq);

}  // namespace jetviber
