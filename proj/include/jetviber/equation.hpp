#pragma once

#include <memory>
#include <optional>

#include "jetviber/calculus.hpp"
#include "jetviber/operators.hpp"

namespace jetviber {

/// Which relations define the shell of a reduction.
enum class Shell {
  E,       // F = 0 and its total derivatives; p is free
  TStarE,  // additionally the cotangent relation on p
};

/// How the p-relation of the cotangent equation is built.
enum class CotangentRelation {
  Linearization,  // l_E(p) = 0
  Adjoint,        // l_E^*(p) = 0
};

class DecompositionError : public Error {
 public:
  enum class Kind { NonVanishing, NonlinearInF };
  DecompositionError(Kind kind, DiffPoly residual, const std::string& what)
      : Error(what), kind_(kind), residual_(std::move(residual)) {}
  Kind kind() const { return kind_; }
  const DiffPoly& residual() const { return residual_; }

 private:
  Kind kind_;
  DiffPoly residual_;
};

/// Scalar equation F = 0 solved for a leading derivative u_lead:
/// F = c (u_lead - rhs), rhs free of the lead family. Induces normal forms on
/// u-jets (and, on the cotangent equation, on p-jets).
class EquationModel {
 public:
  /// Without `lead`, the lex-greatest u-jet occurring linearly with a
  /// rational coefficient is chosen.
  EquationModel(std::shared_ptr<const Context> ctx, DiffPoly F, std::optional<MultiIndex> lead = std::nullopt,
                CotangentRelation relation = CotangentRelation::Linearization);

  const Context& ctx() const { return *ctx_; }
  std::shared_ptr<const Context> context_ptr() const { return ctx_; }
  const DiffPoly& F() const { return F_; }
  const MultiIndex& lead() const { return lead_; }
  const Rational& lead_coefficient() const { return lead_coeff_; }
  const DiffPoly& rhs() const { return rhs_; }
  /// The cotangent relation l(p) (or its adjoint variant).
  const DiffPoly& p_relation() const { return p_relation_; }
  const DiffPoly& p_rhs() const { return p_rhs_; }
  CotangentRelation relation() const { return relation_; }
  int order() const { return order_; }

  bool is_reducible(const MultiIndex& sigma) const { return lead_.divides(sigma); }

  /// Normal form of u_sigma (of p_sigma) modulo the equation.
  DiffPoly normal_form_u(const MultiIndex& sigma) const;
  DiffPoly normal_form_p(const MultiIndex& sigma) const;
  /// u_sigma rewritten in the coordinates (normal jets, tags), where the tag
  /// Phi_tau stands for D_tau(F).
  DiffPoly tagged_u(const MultiIndex& sigma) const;

  /// The same equation with bindings substituted into F (lead kept).
  EquationModel instantiate(const Bindings& bindings) const;

 private:
  struct Cache;
  std::shared_ptr<const Context> ctx_;
  DiffPoly F_;
  MultiIndex lead_;
  Rational lead_coeff_;
  DiffPoly rhs_;
  DiffPoly p_relation_;
  DiffPoly p_rhs_;
  CotangentRelation relation_;
  int order_ = 0;
  std::shared_ptr<Cache> cache_;
};

/// l_F = sum (dF/du_sigma) D_sigma, acting on the requested slot.
CDiffOp linearize(const DiffPoly& F, const Context& ctx, Slot slot = Slot::U);

/// Normal form modulo E or T*E. Idempotent.
DiffPoly reduce(const DiffPoly& e, const EquationModel& eq, Shell shell);

bool vanishes_on_shell(const DiffPoly& e, const EquationModel& eq, Shell shell);

/// e = residual + sum_tau A_tau D_tau(F) + (terms of degree >= 2 in the F family).
struct FSplit {
  DiffPoly residual;   // reduce(e, E)
  BiDiffOp nabla;      // the A_tau, in normal jets
  DiffPoly nonlinear;  // part of degree >= 2 in the tags, in tagged coordinates
};
FSplit split_on_F(const DiffPoly& e, const EquationModel& eq);

/// Writes e = sum_tau A_tau D_tau(F) exactly. Throws DecompositionError if e
/// does not vanish on E, or if it is not linear in the F family unless
/// `allow_nonlinear`; in that case each higher-degree term is attributed to
/// its least tag, the remaining tags turned back into D_rho(F).
BiDiffOp decompose_on_F(const DiffPoly& e, const EquationModel& eq, bool allow_nonlinear = false);

}  // namespace jetviber
