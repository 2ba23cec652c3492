#include "jetviber/calculus.hpp"

#include <algorithm>
#include <map>

namespace jetviber {

namespace {

Monomial without_one(const Monomial& m, std::size_t even_pos) {
  Monomial r = m;
  if (--r.even[even_pos].second == 0) r.even.erase(r.even.begin() + static_cast<long>(even_pos));
  return r;
}

void add_scaled_product(DiffPoly& out, const Monomial& m, const Rational& c, const DiffPoly& factor) {
  for (const auto& [fm, fc] : factor) {
    auto prod = multiply(m, fm);
    if (!prod) continue;
    Rational v = c * fc;
    if (prod->second < 0) v = -v;
    out.add_term(std::move(prod->first), v);
  }
}

}  // namespace

DiffPoly total_derivative(const Atom& a, std::size_t var, const Context& ctx) {
  switch (a.kind) {
    case AtomKind::IndepVar:
      return a.symbol == var ? DiffPoly(1) : DiffPoly();
    case AtomKind::Const:
      return {};
    case AtomKind::FunDeriv: {
      const auto& decl = ctx.function(a.symbol);
      DiffPoly r;
      for (std::size_t k = 0; k < decl.args.size(); ++k) {
        const DiffPoly darg = total_derivative(decl.args[k], var, ctx);
        if (darg.is_zero()) continue;
        Atom next = a;
        next.index.bump(k);
        r += DiffPoly::atom(next) * darg;
      }
      return r;
    }
    case AtomKind::Tag:
    case AtomKind::JetU:
    case AtomKind::JetP: {
      Atom next = a;
      next.index.bump(var);
      return DiffPoly::atom(next);
    }
  }
  return {};
}

DiffPoly total_derivative(const DiffPoly& e, std::size_t var, const Context& ctx) {
  DiffPoly r;
  std::map<Atom, DiffPoly> cache;
  for (const auto& [m, c] : e) {
    for (std::size_t k = 0; k < m.even.size(); ++k) {
      const auto& [a, n] = m.even[k];
      auto it = cache.find(a);
      if (it == cache.end()) it = cache.emplace(a, total_derivative(a, var, ctx)).first;
      if (it->second.is_zero()) continue;
      add_scaled_product(r, without_one(m, k), c * n, it->second);
    }
    for (std::size_t j = 0; j < m.odd.size(); ++j) {
      Monomial next = m;
      next.odd[j].bump(var);
      // The raised index only moves right in the canonical order.
      int sign = 1;
      std::size_t pos = j;
      bool dead = false;
      while (pos + 1 < next.odd.size()) {
        const auto cmp = next.odd[pos] <=> next.odd[pos + 1];
        if (cmp == 0) {
          dead = true;
          break;
        }
        if (cmp < 0) break;
        std::swap(next.odd[pos], next.odd[pos + 1]);
        sign = -sign;
        ++pos;
      }
      if (dead) continue;
      r.add_term(std::move(next), sign > 0 ? c : Rational(-c));
    }
  }
  return r;
}

DiffPoly total_derivative(const DiffPoly& e, const MultiIndex& sigma, const Context& ctx) {
  DiffPoly r = e;
  for (std::size_t v = 0; v < kMaxIndices; ++v)
    for (int k = 0; k < sigma[v]; ++k) {
      if (r.is_zero()) return r;
      r = total_derivative(r, v, ctx);
    }
  return r;
}

DiffPoly partial_derivative(const DiffPoly& e, const Atom& a, const Context& ctx) {
  if (a.kind == AtomKind::FunDeriv) throw Error("partial derivative by a function symbol is not defined");
  DiffPoly r;
  if (a.is_odd()) {
    for (const auto& [m, c] : e) {
      auto it = std::find(m.odd.begin(), m.odd.end(), a.index);
      if (it == m.odd.end()) continue;
      const auto k = it - m.odd.begin();
      Monomial next = m;
      next.odd.erase(next.odd.begin() + k);
      r.add_term(std::move(next), k % 2 == 0 ? c : Rational(-c));
    }
    return r;
  }
  for (const auto& [m, c] : e) {
    for (std::size_t k = 0; k < m.even.size(); ++k) {
      const auto& [atom, n] = m.even[k];
      if (atom == a) {
        r.add_term(without_one(m, k), c * n);
      } else if (atom.kind == AtomKind::FunDeriv) {
        const auto& decl = ctx.function(atom.symbol);
        for (std::size_t pos = 0; pos < decl.args.size(); ++pos) {
          if (decl.args[pos] != a) continue;
          Atom next = atom;
          next.index.bump(pos);
          add_scaled_product(r, without_one(m, k), c * n, DiffPoly::atom(next));
        }
      }
    }
  }
  return r;
}

DiffPoly substitute(const DiffPoly& e, const Bindings& bindings, const Context& ctx) {
  std::map<Atom, DiffPoly> atoms;
  std::map<int, const DiffPoly*> functions;
  for (const auto& [a, v] : bindings) {
    if (a.kind == AtomKind::FunDeriv) {
      if (!a.index.empty()) throw Error("substitution key must be a bare function symbol");
      if (v.parity() != 0) throw ParityError("function symbol bound to an odd expression");
      functions[a.symbol] = &v;
    } else if (a.is_odd()) {
      if (v.min_p_degree() != 1 || v.max_p_degree() != 1)
        if (!v.is_zero()) throw ParityError("odd atom bound to an expression that is not p-linear");
      atoms[a] = v;
    } else {
      if (v.parity() != 0) throw ParityError("even atom bound to an odd expression");
      atoms[a] = v;
    }
  }

  auto replacement = [&](const Atom& a) -> const DiffPoly* {
    if (auto it = atoms.find(a); it != atoms.end()) return &it->second;
    if (a.kind != AtomKind::FunDeriv) return nullptr;
    auto fit = functions.find(a.symbol);
    if (fit == functions.end()) return nullptr;
    const auto& decl = ctx.function(a.symbol);
    DiffPoly d = *fit->second;
    for (std::size_t pos = 0; pos < decl.args.size(); ++pos)
      for (int k = 0; k < a.index[pos]; ++k) d = partial_derivative(d, decl.args[pos], ctx);
    return &(atoms[a] = std::move(d));
  };

  DiffPoly r;
  for (const auto& [m, c] : e) {
    DiffPoly term(c);
    Monomial kept;
    for (const auto& [a, n] : m.even) {
      if (const DiffPoly* v = replacement(a))
        term = term * pow(*v, n);
      else
        kept.even.emplace_back(a, n);
    }
    term = term * DiffPoly::monomial(std::move(kept));
    for (const auto& s : m.odd) {
      const Atom pa = Atom::p(s);
      if (const DiffPoly* v = replacement(pa))
        term = term * *v;
      else
        term = term * DiffPoly::atom(pa);
      if (term.is_zero()) break;
    }
    r += term;
  }
  return r;
}

DiffPoly grade_filter(const DiffPoly& e, int max_order) {
  return e.filter([&](const Monomial& m) {
    return std::all_of(m.odd.begin(), m.odd.end(), [&](const MultiIndex& s) { return s.order() <= max_order; });
  });
}

DiffPoly grade_filter_complement(const DiffPoly& e, int max_order) {
  return e.filter([&](const Monomial& m) {
    return std::any_of(m.odd.begin(), m.odd.end(), [&](const MultiIndex& s) { return s.order() > max_order; });
  });
}

std::set<MultiIndex> u_dependencies(const DiffPoly& e, const Context& ctx) {
  std::set<MultiIndex> r;
  for (const auto& [m, c] : e)
    for (const auto& [a, n] : m.even) {
      if (a.kind == AtomKind::JetU) {
        r.insert(a.index);
      } else if (a.kind == AtomKind::FunDeriv) {
        for (const auto& arg : ctx.function(a.symbol).args)
          if (arg.kind == AtomKind::JetU) r.insert(arg.index);
      }
    }
  return r;
}

std::set<MultiIndex> p_dependencies(const DiffPoly& e) {
  std::set<MultiIndex> r;
  for (const auto& [m, c] : e) r.insert(m.odd.begin(), m.odd.end());
  return r;
}

bool depends_on_u(const DiffPoly& e, const Context& ctx) { return !u_dependencies(e, ctx).empty(); }

}  // namespace jetviber
