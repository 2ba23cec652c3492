#pragma once

#include <functional>
#include <string>
#include <vector>

#include "generators.hpp"
#include "jetviber/lang.hpp"
#include "jetviber/search.hpp"
#include "oracle.hpp"

namespace jetviber::props {

struct Outcome {
  std::string name;
  int checked = 0;
  std::string counterexample;  // empty when every sample held
  bool ok() const { return counterexample.empty(); }
};

inline const char* kEquations[] = {
    "indep x y; function h(x, u[x]); equation u[x,y] = 0 solve u[x,y];",
    "indep x y z; equation u[x,y,z] = 0 solve u[x,y,z];",
    "indep x y; equation u[x,x] + u[y,y] = 0 solve u[x,x];",
    "indep x y z; equation u[x,x] + u[y,y] + u[z,z] = 0 solve u[x,x];",
    "indep x y z; constant a; equation u[x,x] + u[y,y] - a^2*u[z,z] = 0 solve u[x,x];",
};

// Runs `body` for n samples; body returns an empty string or a description.
inline Outcome sample(const std::string& name, int n, const std::function<std::string(int)>& body) {
  Outcome o{name, 0, {}};
  for (int i = 0; i < n && o.ok(); ++i, ++o.checked) o.counterexample = body(i);
  return o;
}

inline std::string show(const DiffPoly& e, const Context& ctx) { return print_canonical(e, ctx); }

inline Outcome commuting_derivatives(int n) {
  Session s = parse_session("indep x y z; function h(x, u[x], u[y,z]);");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 11);
  const DiffPoly h = parse_expression("h + pd(h,3)*x", s);
  return sample("D_i D_j = D_j D_i", n, [&](int i) -> std::string {
    const DiffPoly e = g.mixed() + (i % 2 ? g.even(1) * h : DiffPoly());
    const std::size_t a = g.var(), b = g.var();
    if (total_derivative(total_derivative(e, a, ctx), b, ctx) == total_derivative(total_derivative(e, b, ctx), a, ctx))
      return {};
    return show(e, ctx);
  });
}

inline Outcome graded_commutativity(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 12);
  return sample("a b = (-1)^(|a||b|) b a", n, [&](int) -> std::string {
    const int da = g.uniform(0, 2), db = g.uniform(0, 2);
    const DiffPoly a = g.p_homogeneous(da), b = g.p_homogeneous(db);
    const DiffPoly ba = b * a;
    if (a * b == ((da * db) % 2 ? -ba : ba)) return {};
    return show(a, ctx) + " | " + show(b, ctx);
  });
}

inline Outcome left_leibniz(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 13, 1);
  return sample("left derivative Leibniz rule", n, [&](int) -> std::string {
    const int da = g.uniform(0, 2);
    const DiffPoly a = g.p_homogeneous(da), b = g.p_homogeneous(g.uniform(0, 2));
    const Atom v = g.uniform(0, 1) ? Atom::p(g.index()) : Atom::u(g.index());
    const DiffPoly sign = (da % 2 && v.is_odd()) ? DiffPoly(-1) : DiffPoly(1);
    const DiffPoly want = partial_derivative(a, v, ctx) * b + sign * a * partial_derivative(b, v, ctx);
    if (partial_derivative(a * b, v, ctx) == want) return {};
    return show(a, ctx) + " | " + show(b, ctx);
  });
}

inline Outcome identity_substitution(int n) {
  Session s = parse_session("indep x y; function h(x, u[x]);");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 14);
  const Bindings id = parse_bindings("u[x] = u[x], p[y] = p[y], x = x, h = h", s);
  return sample("identity substitution", n, [&](int) -> std::string {
    const DiffPoly e = g.mixed() * parse_expression("1 + h", s);
    if (substitute(e, id, ctx) == e) return {};
    return show(e, ctx);
  });
}

inline Outcome composition(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 15);
  return sample("apply(A o B) = apply(A) o apply(B)", n, [&](int) -> std::string {
    const CDiffOp a = g.op(Slot::P), b = g.op(Slot::P);
    const DiffPoly q = g.p_homogeneous(1, 2);
    if (op_apply(op_compose(a, b, ctx), q, ctx) == op_apply(a, op_apply(b, q, ctx), ctx)) return {};
    return show(q, ctx);
  });
}

inline Outcome adjoint_involution(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 16);
  return sample("A** = A", n, [&](int) -> std::string {
    const CDiffOp a = g.op(Slot::U);
    if (op_adjoint(op_adjoint(a, ctx), ctx) == a) return {};
    return "operator of order " + std::to_string(a.order());
  });
}

inline Outcome adjoint_antihomomorphism(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 17);
  return sample("(A o B)* = B* o A*", n, [&](int) -> std::string {
    const CDiffOp a = g.op(Slot::U), b = g.op(Slot::U);
    if (op_adjoint(op_compose(a, b, ctx), ctx) == op_compose(op_adjoint(b, ctx), op_adjoint(a, ctx), ctx)) return {};
    return "orders " + std::to_string(a.order()) + ", " + std::to_string(b.order());
  });
}

// q A(r) - A*(q) r is a total divergence, so its Euler operator vanishes.
inline Outcome adjoint_by_parts(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 18, 1);
  return sample("q A(r) - A*(q) r is a divergence", n, [&](int) -> std::string {
    const CDiffOp a = g.op(Slot::U, 2);
    const DiffPoly q = g.even(2, false), r = DiffPoly::atom(Atom::u(g.index()));
    const DiffPoly e = q * op_apply(a, r, ctx) - op_apply(op_adjoint(a, ctx), q, ctx) * r;
    if (oracle::euler_u(e, ctx).is_zero()) return {};
    return show(e, ctx);
  });
}

inline Outcome biop_adjoint_twice(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 19);
  return sample("nabla^{*1 *1} = nabla", n, [&](int) -> std::string {
    BiDiffOp b;
    for (int k = g.uniform(1, 3); k > 0; --k) b.add(g.index(), g.p_homogeneous(1, 2));
    if (biop_adjoint_first(biop_adjoint_first(b, ctx), ctx) == b) return {};
    return "sample";
  });
}

inline Outcome p_linear_roundtrip(int n) {
  Session s = parse_session("indep x y;");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 20);
  return sample("op_from_p_linear(apply(A, p)) = A", n, [&](int) -> std::string {
    const CDiffOp a = g.op(Slot::P);
    if (op_from_p_linear(op_apply(a, DiffPoly::atom(Atom::p({})), ctx)) == a) return {};
    return "sample";
  });
}

inline Outcome reduce_idempotent(int n) {
  Outcome o{"reduce(reduce(e)) = reduce(e), reduce(D_s F) = 0", 0, {}};
  for (const char* text : kEquations) {
    const Session s = parse_session(text);
    const EquationModel& eq = s.equation();
    const Context& ctx = s.ctx();
    testgen::Gen g(ctx, 21, 4);
    for (int i = 0; i < n && o.ok(); ++i, ++o.checked) {
      const DiffPoly e = g.mixed();
      for (Shell sh : {Shell::E, Shell::TStarE}) {
        const DiffPoly r = reduce(e, eq, sh);
        if (reduce(r, eq, sh) != r) o.counterexample = show(e, ctx);
      }
    }
    std::vector<MultiIndex> sigmas;
    for_each_sub_index(MultiIndex::unit(0, 6) + MultiIndex::unit(1, 6) + MultiIndex::unit(2, 6), [&](const MultiIndex& t) {
      if (t.order() <= 6 && (ctx.indep_count() == 3 || t[2] == 0)) sigmas.push_back(t);
    });
    for (const auto& t : sigmas) {
      if (!o.ok()) break;
      ++o.checked;
      if (!reduce(total_derivative(eq.F(), t, ctx), eq, Shell::E).is_zero()) o.counterexample = text;
    }
  }
  return o;
}

inline Outcome decompose_reconstruction(int n) {
  Outcome o{"sum A_t D_t(F) reconstructs the input", 0, {}};
  for (const char* text : kEquations) {
    const Session s = parse_session(text);
    const EquationModel& eq = s.equation();
    const Context& ctx = s.ctx();
    testgen::Gen g(ctx, 22);
    for (int i = 0; i < n && o.ok(); ++i, ++o.checked) {
      DiffPoly e;
      for (int k = g.uniform(1, 3); k > 0; --k) e += total_derivative(eq.F(), g.index(), ctx) * reduce(g.p_homogeneous(g.uniform(0, 1), 2), eq, Shell::E);
      const BiDiffOp d = decompose_on_F(e, eq);
      DiffPoly back;
      for (const auto& [tau, a] : d.terms()) back += total_derivative(eq.F(), tau, ctx) * a;
      if (back != e) o.counterexample = show(e, ctx);
    }
  }
  return o;
}

inline Outcome self_adjoint_linearizations() {
  Outcome o{"l_F* = (-1)^order l_F on the catalog equations", 0, {}};
  for (const char* text : kEquations) {
    const Session s = parse_session(text);
    const CDiffOp l = linearize(s.equation().F(), s.ctx());
    ++o.checked;
    const CDiffOp want = l.order() % 2 ? l * Rational(-1) : l;
    if (op_adjoint(l, s.ctx()) != want) o.counterexample = text;
  }
  return o;
}

inline Outcome ev_leibniz(int n) {
  Session s = parse_session("indep x y; function h(x, u[x]);");
  const Context& ctx = s.ctx();
  testgen::Gen g(ctx, 23, 1);
  return sample("Ev(ab) = Ev(a) b + (-1)^|a| a Ev(b)", n, [&](int) -> std::string {
    const GeneratingSection phi{g.p_homogeneous(1, 2), g.p_homogeneous(2, 2)};
    const int da = g.uniform(0, 2);
    const DiffPoly a = g.p_homogeneous(da, 2), b = g.p_homogeneous(g.uniform(0, 2), 2);
    const DiffPoly eb = evolutionary_apply(phi, b, ctx);
    const DiffPoly want = evolutionary_apply(phi, a, ctx) * b + (da % 2 ? -(a * eb) : a * eb);
    if (evolutionary_apply(phi, a * b, ctx) == want) return {};
    return show(a, ctx) + " | " + show(b, ctx);
  });
}

struct CorpusPair {
  std::string session;
  std::vector<std::string> names;
};

inline std::vector<CorpusPair> bracket_corpus() {
  return {{"indep x y; function h1(x, u[x]); function h2(y, u[y]); equation u[x,y] = 0 solve u[x,y];"
           "bivector B0 = p; bivector B1 = 1/2*D[x](h1)*p[x] + h1*p[x,x];"
           "bivector B2 = 1/2*D[y](h2)*p[y] + h2*p[y,y];",
           {"B0", "B1", "B2"}},
          {"indep x y; equation u[x,x] + u[y,y] = 0 solve u[x,x];"
           "bivector B1 = p[y,y]; bivector B3 = p[y] + 2*(x*p[x,y] + y*p[y,y]);"
           "bivector B5 = u[y,y]*p[y] - u[x,y]*p[x] + 2*(u[y]*p[y,y] - u[x]*p[x,y]);"
           "bivector B6 = u[y,y]*p[x] + u[x,y]*p[y] + 2*(u[y]*p[x,y] + u[x]*p[y,y]);",
           {"B1", "B3", "B5", "B6"}},
          {"indep x y z; function g(x, y, u[x,y]); function h(x); equation u[x,y,z] = 0 solve u[x,y,z];"
           "bivector B1 = h*p[x]; bivector B3 = 1/2*D[x](g)*p[x,y] + g*p[x,x,y];",
           {"B1", "B3"}}};
}

inline Outcome bracket_symmetry() {
  Outcome o{"[[H, H']] = [[H', H]]", 0, {}};
  for (const auto& c : bracket_corpus()) {
    const Session s = parse_session(c.session);
    for (const auto& a : c.names)
      for (const auto& b : c.names) {
        ++o.checked;
        if (o.ok() && schouten_bracket(s.bivector(a), s.bivector(b), s.equation()) !=
                          schouten_bracket(s.bivector(b), s.bivector(a), s.equation()))
          o.counterexample = a + ", " + b;
      }
  }
  return o;
}

inline Outcome bracket_bilinearity(int n) {
  Outcome o{"[[aH1 + bH2, H3]] = a[[H1, H3]] + b[[H2, H3]]", 0, {}};
  std::mt19937 rng(24);
  auto coeff = [&]() {
    Rational r(std::uniform_int_distribution<int>(-6, 6)(rng), std::uniform_int_distribution<int>(1, 4)(rng));
    r.canonicalize();
    return r;
  };
  for (const auto& c : bracket_corpus()) {
    const Session s = parse_session(c.session);
    const EquationModel& eq = s.equation();
    auto pick = [&]() { return s.bivector(c.names[std::uniform_int_distribution<std::size_t>(0, c.names.size() - 1)(rng)]); };
    for (int i = 0; i < n && o.ok(); ++i, ++o.checked) {
      const Bivector h1 = pick(), h2 = pick(), h3 = pick();
      const Rational a = coeff(), b = coeff();
      const Bivector sum("sum", h1.hu() * a + h2.hu() * b);
      const DiffPoly lhs = schouten_bracket(sum, h3, eq);
      const DiffPoly rhs = schouten_bracket(h1, h3, eq) * a + schouten_bracket(h2, h3, eq) * b;
      if (lhs != rhs) o.counterexample = h1.name() + ", " + h2.name() + ", " + h3.name();
    }
  }
  return o;
}

// Random x,y,z-coefficient bivectors are drawn from the span found by the
// search and must have H_p = 0 and commute pairwise.
inline Outcome constant_coefficient_structures(int n) {
  struct Setup {
    const char* eq;
    int order;
    int degree;
  };
  const Setup setups[] = {
      {"indep x y; equation u[x,y] = 0 solve u[x,y];", 2, 3},
      {"indep x y z; equation u[x,y,z] = 0 solve u[x,y,z];", 3, 2},
      {"indep x y; equation u[x,x] + u[y,y] = 0 solve u[x,x];", 2, 3},
  };
  Outcome o{"x,y,z-only bivectors: H_p = 0, pairwise brackets 0", 0, {}};
  std::mt19937 rng(25);
  for (const auto& st : setups) {
    const Session s = parse_session(st.eq);
    const EquationModel& eq = s.equation();
    std::vector<Atom> vars;
    for (std::size_t v = 0; v < s.ctx().indep_count(); ++v) vars.push_back(Atom::indep(static_cast<int>(v)));
    const SearchResult r = search_bivectors(eq, st.order, vars, st.degree);
    std::vector<Bivector> drawn;
    for (int i = 0; i < n && o.ok(); ++i, ++o.checked) {
      DiffPoly hu;
      for (const auto& b : r.basis)
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
          hu += b.hu() * Rational(std::uniform_int_distribution<int>(-3, 3)(rng));
      if (hu.is_zero()) hu = r.basis[static_cast<std::size_t>(i) % r.basis.size()].hu();
      const Bivector b("R" + std::to_string(i), hu);
      if (!generating_section(b, eq).phi_p.is_zero()) o.counterexample = show(hu, s.ctx()) + ": H_p != 0";
      if (!drawn.empty() && !schouten_bracket(b, drawn.back(), eq).is_zero())
        o.counterexample = show(hu, s.ctx()) + ": bracket with previous sample";
      if (!schouten_bracket(b, b, eq).is_zero()) o.counterexample = show(hu, s.ctx()) + ": not Poisson";
      drawn.push_back(b);
    }
  }
  return o;
}

inline std::vector<Outcome> all(int n) {
  return {commuting_derivatives(n),
          graded_commutativity(n),
          left_leibniz(n),
          identity_substitution(n),
          composition(n),
          adjoint_involution(n),
          adjoint_antihomomorphism(n),
          adjoint_by_parts(n),
          biop_adjoint_twice(n),
          p_linear_roundtrip(n),
          reduce_idempotent(n),
          decompose_reconstruction(n),
          self_adjoint_linearizations(),
          ev_leibniz(n),
          bracket_symmetry(),
          bracket_bilinearity(n / 10 + 1),
          constant_coefficient_structures(n)};
}

}  // namespace jetviber::props
