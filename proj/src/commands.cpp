#include "jetviber/commands.hpp"

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace jetviber {

namespace {

Bindings bindings_for(const Session& s, const std::optional<std::string>& inst) {
  if (!inst) return {};
  return resolve_instantiation(*inst, s);
}

class Timer {
 public:
  double millis() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Runs `body`, turning exceptions into ERROR/FAIL items.
template <class Body>
ReportItem guarded(std::string task, std::string item, Body body) {
  ReportItem r;
  r.task = std::move(task);
  r.item = std::move(item);
  Timer t;
  try {
    body(r);
  } catch (const NotABivector& e) {
    r.status = Status::Fail;
    r.message = e.what();
  } catch (const InternalError& e) {
    r.status = Status::Error;
    r.internal = true;
    r.message = e.what();
  } catch (const Error& e) {
    r.status = Status::Error;
    r.message = e.what();
  } catch (const std::exception& e) {
    r.status = Status::Error;
    r.internal = true;
    r.message = std::string("internal: ") + e.what();
  }
  r.millis = t.millis();
  return r;
}

std::string join(const std::vector<std::string>& v, const char* sep = " ") {
  std::string r;
  for (std::size_t i = 0; i < v.size(); ++i) r += (i ? sep : "") + v[i];
  return r;
}

void check_payload(ReportItem& r, const BivectorCheck& c, const Context& ctx) {
  if (!c.cotangent_ok) {
    r.payload.emplace_back("failed", "condition l_E(H_u) = 0 on T*E");
    r.payload.emplace_back("residual", print_canonical(c.cotangent_residual, ctx));
  } else if (!c.self_adjoint_ok) {
    r.payload.emplace_back("failed", "condition l_E o H = H* o l_E^*");
    r.payload.emplace_back("residual", print_canonical(c.self_adjoint_residual, ctx));
  }
}

// Terms of `part` that occur in `whole` with the same coefficient.
bool contains_terms(const DiffPoly& whole, const DiffPoly& part) {
  for (const auto& [m, c] : part) {
    auto it = whole.terms().find(m);
    if (it == whole.terms().end() || it->second != c) return false;
  }
  return true;
}

void compare(ReportItem& r, const DiffPoly& got, const DiffPoly& want, const Context& ctx, bool contains = false) {
  const bool ok = contains ? contains_terms(got, want) : got == want;
  r.status = ok ? Status::Pass : Status::Fail;
  if (!ok) {
    r.payload.emplace_back("expected", print_canonical(want, ctx));
    r.payload.emplace_back("computed", contains ? std::to_string(got.size()) + " terms" : print_canonical(got, ctx));
    if (!contains) r.payload.emplace_back("difference", print_canonical(got - want, ctx));
  } else if (!contains) {
    r.payload.emplace_back("value", print_canonical(got, ctx));
  }
}

}  // namespace

// ---------------------------------------------------------------- Instance

Instance::Instance(const Session& session, const std::optional<std::string>& instantiation)
    : session_(session),
      bindings_(bindings_for(session, instantiation)),
      eq_(bindings_.empty() ? session.equation() : session.equation().instantiate(bindings_)) {}

Bivector Instance::bivector(const std::string& name_or_expr) const {
  const NamedExpression* n = session_.find(name_or_expr);
  DiffPoly hu = n && n->bivector ? n->value : parse_expression(name_or_expr, session_);
  return Bivector(name_or_expr, apply(hu));
}

DiffPoly Instance::apply(const DiffPoly& e) const {
  return bindings_.empty() ? e : substitute(e, bindings_, session_.ctx());
}

// ------------------------------------------------------------------ verify

Report cmd_verify(const Session& session, const std::vector<std::string>& items, const VerifyOptions& opt) {
  Report rep;
  rep.task = "verify";
  std::vector<std::string> names = items.empty() ? session.bivector_names() : items;
  std::optional<Instance> inst;
  try {
    inst.emplace(session, opt.instantiate);
  } catch (const Error& e) {
    ReportItem r{"verify", session.name, Status::Error, e.what(), {}, 0, false};
    rep.add(r);
    return rep;
  }
  for (const auto& n : names) {
    rep.add(guarded("verify", n, [&](ReportItem& r) {
      const Bivector b = inst->bivector(n);
      const BivectorCheck c = check_bivector(b, inst->equation());
      r.status = c.ok() ? Status::Pass : Status::Fail;
      const Context& ctx = session.ctx();
      r.payload.emplace_back("H_u", print_canonical(b.hu(), ctx));
      if (c.ok())
        r.payload.emplace_back("H_p", print_canonical(generating_section(b, c, inst->equation()).phi_p, ctx));
      else
        check_payload(r, c, ctx);
    }));
  }
  return rep;
}

// ---------------------------------------------------------------- schouten

Report cmd_schouten(const Session& session, const std::string& h1, const std::string& h2,
                    const SchoutenOptions& opt) {
  Report rep;
  rep.task = "schouten";
  rep.add(guarded("schouten", h1 + " " + h2, [&](ReportItem& r) {
    const Instance inst(session, opt.instantiate);
    const Context& ctx = session.ctx();
    const Bivector a = inst.bivector(h1);
    const Bivector b = inst.bivector(h2);
    DiffPoly br = schouten_bracket(a, b, inst.equation());
    const std::size_t total = br.size();
    if (opt.truncate) {
      br = grade_filter_complement(br, *opt.truncate);
      r.payload.emplace_back("above order " + std::to_string(*opt.truncate), print_canonical(br, ctx));
      r.payload.emplace_back("terms", std::to_string(br.size()) + " of " + std::to_string(total));
    } else {
      r.payload.emplace_back("bracket", print_canonical(br, ctx));
    }
    r.status = Status::Pass;
    if (opt.poisson) {
      const bool zero = opt.truncate ? schouten_bracket(a, b, inst.equation()).is_zero() : br.is_zero();
      r.payload.emplace_back(h1 == h2 ? "is_poisson" : "compatible", zero ? "true" : "false");
      if (!zero) r.status = Status::Fail;
    }
  }));
  return rep;
}

// ------------------------------------------------------------------ search

std::vector<Atom> parse_atom_list(const std::string& text, const Session& session) {
  std::vector<Atom> out;
  std::string cur;
  int depth = 0;
  auto flush = [&]() {
    std::string s;
    for (char c : cur)
      if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    cur.clear();
    if (s.empty()) return;
    const DiffPoly e = parse_expression(s, session);
    if (e.size() != 1 || e.begin()->second != 1 || e.begin()->first.even.size() != 1 ||
        e.begin()->first.even[0].second != 1 || !e.begin()->first.odd.empty())
      throw Error("'" + s + "' is not a single variable");
    out.push_back(e.begin()->first.even[0].first);
  };
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0)
      flush();
    else
      cur += c;
  }
  flush();
  return out;
}

namespace {

void search_items(Report& rep, const std::string& task, const Instance& inst, int order, const std::vector<Atom>& vars,
                  int degree, const std::vector<std::string>& members, std::optional<int> dimension,
                  const std::string& label) {
  const Context& ctx = inst.session().ctx();
  std::optional<SearchResult> res;
  rep.add(guarded(task, label, [&](ReportItem& r) {
    res = search_bivectors(inst.equation(), order, vars, degree);
    r.payload.emplace_back("unknowns", std::to_string(res->ansatz.unknowns()));
    r.payload.emplace_back("equations", std::to_string(res->rows));
    r.payload.emplace_back("dimension", std::to_string(res->kernel.size()));
    r.status = Status::Pass;
    if (dimension && static_cast<std::size_t>(*dimension) != res->kernel.size()) {
      r.status = Status::Fail;
      r.message = "expected dimension " + std::to_string(*dimension);
    }
    for (const auto& b : res->basis) r.payload.emplace_back(b.name(), print_canonical(b.hu(), ctx));
  }));
  if (!res) return;
  for (const auto& m : members) {
    rep.add(guarded(task, label + " contains " + m, [&](ReportItem& r) {
      const Bivector b = inst.bivector(m);
      const Membership mem = span_contains(*res, b.hu());
      r.status = mem.contained ? Status::Pass : Status::Fail;
      if (!mem.contained) r.message = mem.reason;
    }));
  }
}

std::string search_label(int order, const std::vector<Atom>& vars, int degree, const Context& ctx) {
  std::vector<std::string> v;
  for (const auto& a : vars) v.push_back(print_atom(a, ctx));
  return "search order " + std::to_string(order) + " vars " + (v.empty() ? "-" : join(v, ",")) + " degree " +
         std::to_string(degree);
}

}  // namespace

Report cmd_search(Session& session, const SearchOptions& opt) {
  Report rep;
  rep.task = "search";
  std::vector<std::string> members;
  std::optional<Instance> inst;
  std::vector<Atom> vars;
  try {
    if (opt.contains) {
      std::error_code ec;
      const auto want = std::filesystem::weakly_canonical(*opt.contains, ec);
      for (const auto& c : session.catalogs())
        if (std::filesystem::weakly_canonical(session.base_dir / c.file, ec) == want) members = c.entries;
      if (members.empty()) {
        std::ifstream in(*opt.contains);
        if (!in) throw Error("cannot open '" + opt.contains->string() + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        members = parse_into(session, buf.str(), opt.contains->string());
      }
    }
    inst.emplace(session, opt.instantiate);
    vars = parse_atom_list(join(opt.coeff_vars, ","), session);
  } catch (const Error& e) {
    ReportItem r{"search", session.name, Status::Error, e.what(), {}, 0, false};
    rep.add(r);
    return rep;
  }
  const int order = opt.max_jet_order >= 0 ? opt.max_jet_order : inst->equation().order();
  // Entries that fail the direct check are reported, not searched for.
  std::vector<std::string> searchable;
  for (const auto& m : members) {
    bool ok = false;
    try {
      ok = check_bivector(inst->bivector(m), inst->equation()).ok();
    } catch (const Error&) {
    }
    if (ok)
      searchable.push_back(m);
    else
      rep.warnings.push_back(m + ": fails the bivector check, excluded from membership");
  }
  search_items(rep, "search", *inst, order, vars, opt.coeff_degree, searchable, std::nullopt,
               search_label(order, vars, opt.coeff_degree, session.ctx()));
  return rep;
}

// -------------------------------------------------------------- directives

namespace {

std::string directive_label(const Directive& d) {
  std::string t = d.text;
  if (t.rfind("expect ", 0) == 0) t = t.substr(7);
  const auto eq = t.find(" =");
  if (eq != std::string::npos && t.size() > 90) t = t.substr(0, eq) + " = ...";
  return t;
}

void catalog_directive(Report& rep, const Session& s, const Directive& d, const std::string& task,
                       const std::string& label) {
  const Catalog* cat = s.find_catalog(d.catalog);
  std::vector<std::string> failing;
  std::size_t passed = 0;
  rep.add(guarded(task, label, [&](ReportItem& r) {
    const Instance inst(s, d.under);
    const Context& ctx = s.ctx();
    for (const auto& n : cat->entries) {
      const Bivector b = inst.bivector(n);
      const BivectorCheck c = check_bivector(b, inst.equation());
      std::string verdict;
      if (!c.ok()) {
        verdict = c.failure();
      } else {
        const PoissonResult p = is_poisson(b, inst.equation());
        if (p.poisson) {
          ++passed;
          verdict = "pass";
        } else {
          verdict = "bivector, not Poisson: " + print_canonical(p.bracket, ctx);
        }
      }
      if (verdict != "pass") failing.push_back(n);
      r.payload.emplace_back(n, verdict);
    }
    // exact duplicates are worth a warning
    std::vector<std::pair<std::string, DiffPoly>> values;
    for (const auto& n : cat->entries) values.emplace_back(n, s.find(n)->value);
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (values[i].second == values[j].second)
          rep.warnings.push_back("catalog " + cat->name + ": " + values[i].first + " is identical to " + values[j].first);

    std::set<std::string> fail_set(failing.begin(), failing.end());
    std::set<std::string> suspect_set;
    for (const auto& n : cat->entries)
      if (s.suspects().count(n)) suspect_set.insert(n);
    for (const auto& n : suspect_set)
      rep.warnings.push_back("catalog " + cat->name + ": " + n + " is a suspected typo (" + s.suspects().at(n) + "), " +
                             (fail_set.count(n) ? "fails" : "passes"));
    const std::size_t need = d.min_pass ? static_cast<std::size_t>(*d.min_pass) : cat->entries.size();
    r.status = passed >= need && fail_set == suspect_set ? Status::Pass : Status::Fail;
    r.message = std::to_string(passed) + " of " + std::to_string(cat->entries.size()) + " pass";
    if (fail_set != suspect_set) r.message += "; failing entries differ from the suspect list";
  }));
}

void search_directive(Report& rep, const Session& s, const Directive& d, const std::string& task) {
  std::optional<Instance> inst;
  rep.add(guarded(task, "prepare " + directive_label(d), [&](ReportItem& r) {
    inst.emplace(s, d.under);
    r.status = Status::Pass;
  }));
  if (!inst) return;
  rep.items.pop_back();
  std::vector<std::string> members = d.names;
  if (!d.catalog.empty()) {
    for (const auto& n : s.find_catalog(d.catalog)->entries) {
      bool ok = false;
      try {
        ok = check_bivector(inst->bivector(n), inst->equation()).ok();
      } catch (const Error&) {
      }
      if (ok) members.push_back(n);
    }
  }
  search_items(rep, task, *inst, d.max_jet_order, d.vars, d.degree, members, d.dimension,
               search_label(d.max_jet_order, d.vars, d.degree, s.ctx()) + (d.under ? " under " + *d.under : ""));
}

ReportItem simple_directive(const Session& s, const Directive& d, const std::string& task, const std::string& label) {
  return guarded(task, label, [&](ReportItem& r) {
    const Instance inst(s, d.under);
    const EquationModel& eq = inst.equation();
    const Context& ctx = s.ctx();
    std::vector<Bivector> bs;
    for (const auto& n : d.names) bs.push_back(inst.bivector(n));
    const std::optional<DiffPoly> want = d.expected ? std::optional<DiffPoly>(inst.apply(*d.expected)) : std::nullopt;
    using K = Directive::Kind;
    switch (d.kind) {
      case K::Bivector: {
        bool all = true;
        for (const auto& b : bs) {
          const BivectorCheck c = check_bivector(b, eq);
          if (c.ok() == d.negated) {
            all = false;
            r.payload.emplace_back(b.name(), c.ok() ? "is a bivector" : c.failure());
            check_payload(r, c, ctx);
          }
        }
        r.status = all ? Status::Pass : Status::Fail;
        break;
      }
      case K::Hp:
        compare(r, generating_section(bs[0], eq).phi_p, reduce(*want, eq, Shell::TStarE), ctx);
        break;
      case K::Nabla: {
        const BivectorCheck c = check_bivector(bs[0], eq);
        if (!c.ok()) throw NotABivector(c);
        compare(r, c.nabla->component(d.component), reduce(*want, eq, Shell::E), ctx);
        break;
      }
      case K::Adjoint: {
        const BivectorCheck c = check_bivector(bs[0], eq);
        if (!c.ok()) throw NotABivector(c);
        compare(r, reduce(adjoint_at_p(*c.nabla, ctx), eq, Shell::TStarE), reduce(*want, eq, Shell::TStarE), ctx);
        break;
      }
      case K::Bracket: {
        DiffPoly br = schouten_bracket(bs[0], bs[1], eq);
        if (d.above) br = grade_filter_complement(br, *d.above);
        compare(r, br, reduce(*want, eq, Shell::TStarE), ctx, d.contains);
        break;
      }
      case K::Poisson: {
        bool all = true;
        for (const auto& b : bs) {
          const PoissonResult p = is_poisson(b, eq);
          if (p.poisson == d.negated) {
            all = false;
            r.payload.emplace_back(b.name(), p.poisson ? "bracket vanishes" : print_canonical(p.bracket, ctx));
          }
        }
        r.status = all ? Status::Pass : Status::Fail;
        break;
      }
      case K::Compatible: {
        const DiffPoly br = schouten_bracket(bs[0], bs[1], eq);
        r.status = br.is_zero() != d.negated ? Status::Pass : Status::Fail;
        if (!br.is_zero()) r.payload.emplace_back("bracket", print_canonical(br, ctx));
        break;
      }
      case K::Equal:
        compare(r, bs[0].hu(), *want, ctx);
        break;
      case K::Symmetry:
        r.status = is_cotangent_symmetry(generating_section(bs[0], eq), eq) ? Status::Pass : Status::Fail;
        break;
      case K::Catalog:
      case K::Search:
        throw InternalError("unexpected directive kind");
    }
  });
}

}  // namespace

Report run_directives(const Session& session) {
  Report rep;
  rep.task = session.name;
  for (const auto& d : session.directives()) {
    const std::string label = directive_label(d);
    if (d.kind == Directive::Kind::Catalog)
      catalog_directive(rep, session, d, session.name, label);
    else if (d.kind == Directive::Kind::Search)
      search_directive(rep, session, d, session.name);
    else
      rep.add(simple_directive(session, d, session.name, label));
  }
  return rep;
}

Report cmd_fixtures(const FixturesOptions& opt) {
  Report rep;
  rep.task = "fixtures";
  const auto list = opt.data_dir / "fixtures.list";
  std::ifstream in(list);
  if (!in) {
    rep.add({"fixtures", list.string(), Status::Error, "cannot open fixture list", {}, 0, false});
    return rep;
  }
  std::vector<std::string> names;
  for (std::string w; in >> w;)
    if (w[0] != '#') names.push_back(w);
  for (const auto& o : opt.only)
    if (std::find(names.begin(), names.end(), o) == names.end())
      rep.add({"fixtures", o, Status::Error, "no such fixture session", {}, 0, false});
  for (const auto& n : names) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), n) == opt.only.end()) continue;
    try {
      rep.merge(run_directives(load_session(opt.data_dir / (n + ".jet"))));
    } catch (const Error& e) {
      rep.add({n, "load", Status::Error, e.what(), {}, 0, false});
    }
  }
  return rep;
}

}  // namespace jetviber
