#include "jetviber/search.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace jetviber {

DiffPoly Ansatz::element(std::size_t k) const {
  const std::size_t nb = basis.size();
  Monomial m = basis[k % nb];
  m.odd.push_back(slots[k / nb]);
  return DiffPoly::monomial(std::move(m));
}

DiffPoly Ansatz::combine(const std::vector<Integer>& coeffs) const {
  DiffPoly r;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) r += element(k) * Rational(coeffs[k]);
  return r;
}

std::optional<std::vector<Rational>> Ansatz::coordinates(const DiffPoly& hu) const {
  std::map<Monomial, std::size_t, MonomialLess> index;
  for (std::size_t b = 0; b < basis.size(); ++b) index.emplace(basis[b], b);
  std::vector<Rational> v(unknowns());
  for (const auto& [m, c] : hu) {
    if (m.odd.size() != 1) return std::nullopt;
    auto s = std::find(slots.begin(), slots.end(), m.odd[0]);
    if (s == slots.end()) return std::nullopt;
    Monomial even = m;
    even.odd.clear();
    auto it = index.find(even);
    if (it == index.end()) return std::nullopt;
    v[static_cast<std::size_t>(s - slots.begin()) * basis.size() + it->second] = c;
  }
  return v;
}

namespace {

void monomials(const std::vector<Atom>& vars, int degree, std::vector<Monomial>& out) {
  std::vector<std::uint32_t> exps(vars.size(), 0);
  // by total degree, then lexicographic in vars
  for (int d = 0; d <= degree; ++d) {
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == vars.size()) {
        if (left != 0) return;
        Monomial m;
        for (std::size_t j = 0; j < vars.size(); ++j)
          if (exps[j] > 0) m.even.emplace_back(vars[j], exps[j]);
        std::sort(m.even.begin(), m.even.end());
        out.push_back(std::move(m));
        return;
      }
      for (int e = left; e >= 0; --e) {
        exps[i] = static_cast<std::uint32_t>(e);
        rec(i + 1, left - e);
      }
      exps[i] = 0;
    };
    if (vars.empty()) {
      if (d == 0) out.emplace_back();
      continue;
    }
    rec(0, d);
  }
}

void all_indices(std::size_t n, int max_order, std::vector<MultiIndex>& out) {
  std::set<MultiIndex> level{MultiIndex{}};
  for (int o = 0; o <= max_order; ++o) {
    out.insert(out.end(), level.begin(), level.end());
    std::set<MultiIndex> next;
    for (const auto& s : level)
      for (std::size_t v = 0; v < n; ++v) {
        MultiIndex t = s;
        t.bump(v);
        next.insert(t);
      }
    level = std::move(next);
  }
}

}  // namespace

Ansatz build_ansatz(const EquationModel& eq, int max_jet_order, std::vector<Atom> vars, int degree) {
  if (max_jet_order < 0) throw Error("jet order must be nonnegative");
  if (degree < 0) throw Error("coefficient degree must be nonnegative");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const Atom& a = vars[i];
    if (a.kind != AtomKind::IndepVar && a.kind != AtomKind::JetU)
      throw Error("coefficient variables must be independent variables or u-jets");
    if (a.kind == AtomKind::JetU && eq.is_reducible(a.index))
      throw Error("coefficient variable is reducible on the equation");
    for (std::size_t j = 0; j < i; ++j)
      if (vars[j] == a) throw Error("repeated coefficient variable");
  }
  Ansatz an;
  an.vars = std::move(vars);
  std::vector<MultiIndex> idx;
  all_indices(eq.ctx().indep_count(), max_jet_order, idx);
  for (const auto& s : idx)
    if (!eq.is_reducible(s)) an.slots.push_back(s);
  if (an.slots.empty()) throw Error("ansatz has no p-slots");
  monomials(an.vars, degree, an.basis);
  return an;
}

DeterminingSystem determining_system(const Ansatz& ansatz, const EquationModel& eq) {
  DeterminingSystem sys;
  sys.columns = ansatz.unknowns();
  struct KeyLess {
    bool operator()(const std::pair<int, Monomial>& a, const std::pair<int, Monomial>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return MonomialLess{}(a.second, b.second);
    }
  };
  std::map<std::pair<int, Monomial>, std::size_t, KeyLess> rows;
  auto add = [&](int cond, const DiffPoly& residual, std::size_t col) {
    for (const auto& [m, c] : residual) {
      auto [it, fresh] = rows.emplace(std::make_pair(cond, m), sys.rows.size());
      if (fresh) sys.rows.push_back({cond, m, {}});
      sys.rows[it->second].entries.emplace_back(col, c);
    }
  };
  const CDiffOp lin = linearize(eq.F(), eq.ctx(), Slot::P);
  for (std::size_t k = 0; k < sys.columns; ++k) {
    const DiffPoly e = ansatz.element(k);
    add(2, reduce(op_apply(lin, e, eq.ctx()), eq, Shell::TStarE), k);
    add(3, split_on_F(self_adjointness_defect(Bivector("", e), eq), eq).residual, k);
  }
  return sys;
}

void make_primitive(std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v)
    if (x != 0) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
      if (g == 1) return;
    }
  if (g > 1)
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

std::vector<Integer> primitive(const std::vector<Rational>& v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_num() * (l / v[i].get_den());
  make_primitive(r);
  return r;
}

namespace {

std::size_t leading(const std::vector<Integer>& row) {
  for (std::size_t i = 0; i < row.size(); ++i)
    if (row[i] != 0) return i;
  return row.size();
}

// row := row * (p / g) - pivot_row * (row[col] / g), zeroing row[col].
void eliminate(std::vector<Integer>& row, const std::vector<Integer>& pivot_row, std::size_t col) {
  if (row[col] == 0) return;
  Integer g;
  mpz_gcd(g.get_mpz_t(), row[col].get_mpz_t(), pivot_row[col].get_mpz_t());
  const Integer a = pivot_row[col] / g;
  const Integer b = row[col] / g;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (pivot_row[i] == 0) {
      if (row[i] != 0) row[i] *= a;
    } else {
      row[i] = row[i] * a - pivot_row[i] * b;
    }
  }
  make_primitive(row);
}

}  // namespace

void EchelonBasis::reduce(std::vector<Integer>& row) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) eliminate(row, rows_[i], pivots_[i]);
}

bool EchelonBasis::insert(std::vector<Integer> row) {
  if (row.size() != columns_) throw Error("row width mismatch");
  reduce(row);
  const std::size_t lead = leading(row);
  if (lead == columns_) return false;
  if (row[lead] < 0)
    for (auto& x : row) x = -x;
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
  const auto at = pos - pivots_.begin();
  pivots_.insert(pos, lead);
  rows_.insert(rows_.begin() + at, std::move(row));
  return true;
}

bool EchelonBasis::contains(std::vector<Integer> row) const {
  if (row.size() != columns_) throw Error("row width mismatch");
  reduce(row);
  return leading(row) == columns_;
}

std::vector<std::vector<Integer>> EchelonBasis::kernel() const {
  std::vector<std::vector<Integer>> r = rows_;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (j != i) eliminate(r[j], r[i], pivots_[i]);
  std::vector<bool> is_pivot(columns_, false);
  for (auto p : pivots_) is_pivot[p] = true;
  std::vector<std::vector<Integer>> out;
  for (std::size_t f = 0; f < columns_; ++f) {
    if (is_pivot[f]) continue;
    Integer l = 1;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i][f] != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r[i][pivots_[i]].get_mpz_t());
    std::vector<Integer> v(columns_);
    v[f] = l;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i][f] != 0) v[pivots_[i]] = -r[i][f] * (l / r[i][pivots_[i]]);
    make_primitive(v);
    if (v[leading(v)] < 0)
      for (auto& x : v) x = -x;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::vector<Integer>> nullspace(const DeterminingSystem& sys) {
  EchelonBasis e(sys.columns);
  for (const auto& row : sys.rows) {
    std::vector<Rational> dense(sys.columns);
    for (const auto& [k, c] : row.entries) dense[k] += c;
    e.insert(primitive(dense));
    if (e.rank() == sys.columns) break;
  }
  return e.kernel();
}

SearchResult search_bivectors(const EquationModel& eq, int max_jet_order, std::vector<Atom> vars, int degree) {
  SearchResult r;
  r.ansatz = build_ansatz(eq, max_jet_order, std::move(vars), degree);
  const DeterminingSystem sys = determining_system(r.ansatz, eq);
  r.rows = sys.rows.size();
  r.kernel = nullspace(sys);
  for (std::size_t i = 0; i < r.kernel.size(); ++i) {
    Bivector b("S" + std::to_string(i + 1), r.ansatz.combine(r.kernel[i]));
    if (!check_bivector(b, eq).ok())
      throw InternalError("kernel vector " + b.name() + " fails the direct bivector check");
    r.basis.push_back(std::move(b));
  }
  return r;
}

Membership span_contains(const SearchResult& result, const DiffPoly& hu) {
  auto coords = result.ansatz.coordinates(hu);
  if (!coords) return {false, "not expressible in the ansatz"};
  EchelonBasis e(result.ansatz.unknowns());
  for (const auto& v : result.kernel) e.insert(v);
  if (e.contains(primitive(*coords))) return {true, {}};
  return {false, "outside the span of the solutions"};
}

}  // namespace jetviber
