#include "jetviber/diff_poly.hpp"

#include <algorithm>

namespace jetviber {

std::uint32_t Monomial::power_of(const Atom& a) const {
  for (const auto& [atom, n] : even)
    if (atom == a) return n;
  return 0;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  if (a.odd.size() != b.odd.size()) return a.odd.size() > b.odd.size();
  if (auto c = std::lexicographical_compare_three_way(a.odd.begin(), a.odd.end(), b.odd.begin(), b.odd.end());
      c != 0)
    return c < 0;
  return std::lexicographical_compare(a.even.begin(), a.even.end(), b.even.begin(), b.even.end());
}

std::optional<std::pair<Monomial, int>> multiply(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.even.reserve(a.even.size() + b.even.size());
  auto i = a.even.begin();
  auto j = b.even.begin();
  while (i != a.even.end() && j != b.even.end()) {
    if (i->first < j->first) {
      r.even.push_back(*i++);
    } else if (j->first < i->first) {
      r.even.push_back(*j++);
    } else {
      r.even.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    }
  }
  r.even.insert(r.even.end(), i, a.even.end());
  r.even.insert(r.even.end(), j, b.even.end());

  // Merge odd parts; each element of b that jumps over k remaining elements
  // of a contributes (-1)^k.
  int sign = 1;
  r.odd.reserve(a.odd.size() + b.odd.size());
  std::size_t ia = 0, ib = 0;
  while (ia < a.odd.size() && ib < b.odd.size()) {
    const auto c = a.odd[ia] <=> b.odd[ib];
    if (c == 0) return std::nullopt;
    if (c < 0) {
      r.odd.push_back(a.odd[ia++]);
    } else {
      if ((a.odd.size() - ia) % 2 == 1) sign = -sign;
      r.odd.push_back(b.odd[ib++]);
    }
  }
  r.odd.insert(r.odd.end(), a.odd.begin() + static_cast<long>(ia), a.odd.end());
  r.odd.insert(r.odd.end(), b.odd.begin() + static_cast<long>(ib), b.odd.end());
  return std::make_pair(std::move(r), sign);
}

DiffPoly::DiffPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

DiffPoly DiffPoly::atom(const Atom& a) {
  Monomial m;
  if (a.is_odd())
    m.odd.push_back(a.index);
  else
    m.even.emplace_back(a, 1);
  return monomial(std::move(m));
}

DiffPoly DiffPoly::monomial(Monomial m, const Rational& c) {
  DiffPoly r;
  if (c != 0) r.terms_.emplace(std::move(m), c);
  return r;
}

std::optional<Rational> DiffPoly::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

int DiffPoly::max_p_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.p_degree());
  return d;
}

int DiffPoly::min_p_degree() const {
  if (terms_.empty()) return 0;
  int d = terms_.begin()->first.p_degree();
  for (const auto& [m, c] : terms_) d = std::min(d, m.p_degree());
  return d;
}

int DiffPoly::parity() const {
  if (terms_.empty()) return 0;
  const int first = terms_.begin()->first.p_degree() % 2;
  for (const auto& [m, c] : terms_)
    if (m.p_degree() % 2 != first) return -1;
  return first;
}

void DiffPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void DiffPoly::add_term(Monomial&& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.lower_bound(m);
  if (it != terms_.end() && !terms_.key_comp()(m, it->first)) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.emplace_hint(it, std::move(m), c);
  }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

DiffPoly& DiffPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& [m, v] : r.terms_) v = -v;
  return r;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto prod = multiply(ma, mb);
      if (!prod) continue;
      Rational c = ca * cb;
      if (prod->second < 0) c = -c;
      r.add_term(std::move(prod->first), c);
    }
  }
  return r;
}

DiffPoly normalize(const std::vector<RawTerm>& raw) {
  DiffPoly r;
  for (const auto& t : raw) {
    if (t.coeff == 0) continue;
    Monomial m;
    std::vector<MultiIndex> odd;
    bool dead = false;
    for (const auto& [a, n] : t.factors) {
      if (n == 0) continue;
      if (a.is_odd()) {
        if (n > 1) {
          dead = true;
          break;
        }
        odd.push_back(a.index);
      } else {
        auto it = std::find_if(m.even.begin(), m.even.end(), [&](const auto& e) { return e.first == a; });
        if (it == m.even.end())
          m.even.emplace_back(a, n);
        else
          it->second += n;
      }
    }
    if (dead) continue;
    std::sort(m.even.begin(), m.even.end());
    // Insertion sort on the odd factors, counting transpositions.
    int sign = 1;
    for (std::size_t i = 1; i < odd.size(); ++i) {
      for (std::size_t j = i; j > 0 && odd[j] < odd[j - 1]; --j) {
        std::swap(odd[j], odd[j - 1]);
        sign = -sign;
      }
    }
    if (std::adjacent_find(odd.begin(), odd.end()) != odd.end()) continue;
    m.odd = std::move(odd);
    r.add_term(std::move(m), sign > 0 ? t.coeff : Rational(-t.coeff));
  }
  return r;
}

DiffPoly pow(const DiffPoly& x, unsigned n) {
  DiffPoly r(1);
  DiffPoly base = x;
  while (n > 0) {
    if (n & 1u) r = r * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return r;
}

}  // namespace jetviber
