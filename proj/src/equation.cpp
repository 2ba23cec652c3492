#include "jetviber/equation.hpp"

#include <functional>
#include <map>
#include <mutex>

namespace jetviber {

struct EquationModel::Cache {
  std::mutex mutex;
  std::map<MultiIndex, DiffPoly> nf_u;
  std::map<MultiIndex, DiffPoly> nf_p;
  std::map<MultiIndex, DiffPoly> tagged;
};

namespace {

constexpr int kMaxRewriteDepth = 4096;
thread_local int rewrite_depth = 0;

struct DepthGuard {
  DepthGuard() {
    if (++rewrite_depth > kMaxRewriteDepth) {
      --rewrite_depth;
      throw Error("normal-form rewriting does not terminate for the declared leading derivative");
    }
  }
  ~DepthGuard() { --rewrite_depth; }
};

using AtomRewrite = std::function<std::optional<DiffPoly>(const Atom&)>;

/// Replaces atoms for which `rw` returns a value and multiplies out.
DiffPoly rewrite_atoms(const DiffPoly& e, const AtomRewrite& rw) {
  std::map<Atom, std::optional<DiffPoly>> memo;
  auto lookup = [&](const Atom& a) -> const std::optional<DiffPoly>& {
    auto it = memo.find(a);
    if (it == memo.end()) it = memo.emplace(a, rw(a)).first;
    return it->second;
  };
  DiffPoly r;
  for (const auto& [m, c] : e) {
    bool touched = false;
    for (const auto& [a, n] : m.even)
      if (lookup(a)) touched = true;
    for (const auto& s : m.odd)
      if (lookup(Atom::p(s))) touched = true;
    if (!touched) {
      r.add_term(m, c);
      continue;
    }
    DiffPoly term(c);
    Monomial kept;
    for (const auto& [a, n] : m.even) {
      if (const auto& v = lookup(a))
        term = term * pow(*v, n);
      else
        kept.even.emplace_back(a, n);
      if (term.is_zero()) break;
    }
    if (term.is_zero()) continue;
    term = term * DiffPoly::monomial(std::move(kept));
    for (const auto& s : m.odd) {
      const Atom pa = Atom::p(s);
      if (const auto& v = lookup(pa))
        term = term * *v;
      else
        term = term * DiffPoly::atom(pa);
      if (term.is_zero()) break;
    }
    r += term;
  }
  return r;
}

void check_function_args(const Atom& a, const EquationModel& eq) {
  for (const auto& arg : eq.ctx().function(a.symbol).args)
    if (arg.kind == AtomKind::JetU && eq.is_reducible(arg.index))
      throw Error("function '" + eq.ctx().function(a.symbol).name +
                  "' has an argument that is reducible modulo the equation");
}

Rational constant_or_throw(const DiffPoly& d, const std::string& what) {
  auto c = d.as_constant();
  if (!c || *c == 0) throw Error(what);
  return *c;
}

bool mentions_family(const DiffPoly& e, const MultiIndex& lead, const Context& ctx, bool odd) {
  if (odd) {
    for (const auto& s : p_dependencies(e))
      if (lead.divides(s)) return true;
    return false;
  }
  for (const auto& s : u_dependencies(e, ctx))
    if (lead.divides(s)) return true;
  return false;
}

}  // namespace

EquationModel::EquationModel(std::shared_ptr<const Context> ctx, DiffPoly F, std::optional<MultiIndex> lead,
                             CotangentRelation relation)
    : ctx_(std::move(ctx)), F_(std::move(F)), relation_(relation), cache_(std::make_shared<Cache>()) {
  if (F_.is_zero()) throw Error("equation is identically zero");
  if (F_.max_p_degree() != 0) throw Error("equation must not contain p");
  const auto deps = u_dependencies(F_, *ctx_);
  for (const auto& s : deps) order_ = std::max(order_, s.order());

  auto admissible = [&](const MultiIndex& s, Rational& coeff, DiffPoly& rest) {
    const Atom ua = Atom::u(s);
    auto c = partial_derivative(F_, ua, *ctx_).as_constant();
    if (!c || *c == 0) return false;
    rest = F_ - DiffPoly::atom(ua) * *c;
    if (mentions_family(rest, s, *ctx_, false)) return false;
    coeff = *c;
    return true;
  };

  DiffPoly rest;
  if (lead) {
    if (!admissible(*lead, lead_coeff_, rest))
      throw Error("leading derivative must occur linearly with a rational coefficient, and the rest of the "
                  "equation must be free of its derivatives");
    lead_ = *lead;
  } else {
    bool found = false;
    for (auto it = deps.rbegin(); it != deps.rend() && !found; ++it) {
      if (admissible(*it, lead_coeff_, rest)) {
        lead_ = *it;
        found = true;
      }
    }
    if (!found) throw Error("no admissible leading derivative in the equation");
  }
  rhs_ = rest * Rational(-1 / lead_coeff_);

  CDiffOp lin = linearize(F_, *ctx_, Slot::P);
  if (relation_ == CotangentRelation::Adjoint) lin = op_adjoint(lin, *ctx_);
  p_relation_ = op_apply(lin, DiffPoly::atom(Atom::p({})), *ctx_);
  const Rational cp = constant_or_throw(partial_derivative(p_relation_, Atom::p(lead_), *ctx_),
                                        "cotangent relation cannot be solved for the p-lead");
  p_rhs_ = DiffPoly::atom(Atom::p(lead_)) - p_relation_ * Rational(1 / cp);
  if (mentions_family(p_rhs_, lead_, *ctx_, true))
    throw Error("cotangent relation is not in normal form with respect to the p-lead");
}

DiffPoly EquationModel::normal_form_u(const MultiIndex& sigma) const {
  if (!is_reducible(sigma)) return DiffPoly::atom(Atom::u(sigma));
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->nf_u.find(sigma); it != cache_->nf_u.end()) return it->second;
  }
  DepthGuard guard;
  DiffPoly nf = reduce(total_derivative(rhs_, sigma - lead_, *ctx_), *this, Shell::E);
  std::lock_guard lock(cache_->mutex);
  return cache_->nf_u.emplace(sigma, std::move(nf)).first->second;
}

DiffPoly EquationModel::normal_form_p(const MultiIndex& sigma) const {
  if (!is_reducible(sigma)) return DiffPoly::atom(Atom::p(sigma));
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->nf_p.find(sigma); it != cache_->nf_p.end()) return it->second;
  }
  DepthGuard guard;
  DiffPoly nf = reduce(total_derivative(p_rhs_, sigma - lead_, *ctx_), *this, Shell::TStarE);
  std::lock_guard lock(cache_->mutex);
  return cache_->nf_p.emplace(sigma, std::move(nf)).first->second;
}

namespace {
DiffPoly tag_substitute(const DiffPoly& e, const EquationModel& eq) {
  return rewrite_atoms(e, [&](const Atom& a) -> std::optional<DiffPoly> {
    if (a.kind == AtomKind::FunDeriv) check_function_args(a, eq);
    if (a.kind == AtomKind::JetU && eq.is_reducible(a.index)) return eq.tagged_u(a.index);
    return std::nullopt;
  });
}
}  // namespace

DiffPoly EquationModel::tagged_u(const MultiIndex& sigma) const {
  if (!is_reducible(sigma)) return DiffPoly::atom(Atom::u(sigma));
  {
    std::lock_guard lock(cache_->mutex);
    if (auto it = cache_->tagged.find(sigma); it != cache_->tagged.end()) return it->second;
  }
  DepthGuard guard;
  const MultiIndex tau = sigma - lead_;
  DiffPoly t = DiffPoly::atom(Atom::tag(tau)) * Rational(1 / lead_coeff_) +
               tag_substitute(total_derivative(rhs_, tau, *ctx_), *this);
  std::lock_guard lock(cache_->mutex);
  return cache_->tagged.emplace(sigma, std::move(t)).first->second;
}

EquationModel EquationModel::instantiate(const Bindings& bindings) const {
  return EquationModel(ctx_, substitute(F_, bindings, *ctx_), lead_, relation_);
}

CDiffOp linearize(const DiffPoly& F, const Context& ctx, Slot slot) {
  CDiffOp op(slot);
  for (const auto& s : u_dependencies(F, ctx)) op.add(s, partial_derivative(F, Atom::u(s), ctx));
  return op;
}

DiffPoly reduce(const DiffPoly& e, const EquationModel& eq, Shell shell) {
  return rewrite_atoms(e, [&](const Atom& a) -> std::optional<DiffPoly> {
    switch (a.kind) {
      case AtomKind::FunDeriv:
        check_function_args(a, eq);
        return std::nullopt;
      case AtomKind::JetU:
        if (eq.is_reducible(a.index)) return eq.normal_form_u(a.index);
        return std::nullopt;
      case AtomKind::JetP:
        if (shell == Shell::TStarE && eq.is_reducible(a.index)) return eq.normal_form_p(a.index);
        return std::nullopt;
      default:
        return std::nullopt;
    }
  });
}

bool vanishes_on_shell(const DiffPoly& e, const EquationModel& eq, Shell shell) {
  return reduce(e, eq, shell).is_zero();
}

FSplit split_on_F(const DiffPoly& e, const EquationModel& eq) {
  FSplit out;
  const DiffPoly tagged = tag_substitute(e, eq);
  for (const auto& [m, c] : tagged) {
    unsigned degree = 0;
    std::size_t tag_pos = 0;
    for (std::size_t k = 0; k < m.even.size(); ++k) {
      if (m.even[k].first.kind == AtomKind::Tag) {
        if (degree == 0) tag_pos = k;
        degree += m.even[k].second;
      }
    }
    if (degree == 0) {
      out.residual.add_term(m, c);
    } else if (degree == 1) {
      Monomial rest = m;
      const MultiIndex tau = rest.even[tag_pos].first.index;
      rest.even.erase(rest.even.begin() + static_cast<long>(tag_pos));
      out.nabla.add(tau, DiffPoly::monomial(std::move(rest), c));
    } else {
      out.nonlinear.add_term(m, c);
    }
  }
  return out;
}

BiDiffOp decompose_on_F(const DiffPoly& e, const EquationModel& eq, bool allow_nonlinear) {
  FSplit split = split_on_F(e, eq);
  if (!split.residual.is_zero())
    throw DecompositionError(DecompositionError::Kind::NonVanishing, split.residual,
                             "expression does not vanish on the equation");
  if (split.nonlinear.is_zero()) return split.nabla;
  if (!allow_nonlinear)
    throw DecompositionError(DecompositionError::Kind::NonlinearInF, split.nonlinear,
                             "expression is not linear in the equation and its derivatives");
  const Context& ctx = eq.ctx();
  for (const auto& [m, c] : split.nonlinear) {
    Monomial rest = m;
    std::size_t k = 0;
    while (rest.even[k].first.kind != AtomKind::Tag) ++k;
    const MultiIndex tau = rest.even[k].first.index;
    if (--rest.even[k].second == 0) rest.even.erase(rest.even.begin() + static_cast<long>(k));
    DiffPoly a = rewrite_atoms(DiffPoly::monomial(std::move(rest), c), [&](const Atom& atom) -> std::optional<DiffPoly> {
      if (atom.kind == AtomKind::Tag) return total_derivative(eq.F(), atom.index, ctx);
      return std::nullopt;
    });
    split.nabla.add(tau, a);
  }
  return split.nabla;
}

}  // namespace jetviber
