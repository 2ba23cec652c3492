#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "jetviber/atom.hpp"

namespace jetviber {

using Rational = mpq_class;
using Integer = mpz_class;

/// Power product of even atoms times a strictly increasing product of odd
/// jet variables p_sigma.
struct Monomial {
  std::vector<std::pair<Atom, std::uint32_t>> even;  // sorted, powers > 0
  std::vector<MultiIndex> odd;                       // strictly increasing

  int p_degree() const { return static_cast<int>(odd.size()); }
  bool is_one() const { return even.empty() && odd.empty(); }
  std::uint32_t power_of(const Atom& a) const;
  bool operator==(const Monomial&) const = default;
};

/// Storage and print order: p-degree descending, then odd part, then even
/// part, both lexicographic in the canonical atom order.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Graded product of two monomials. Returns nullopt when an odd atom repeats.
/// The int is the sign (+1/-1) produced by sorting the odd factors of a*b.
std::optional<std::pair<Monomial, int>> multiply(const Monomial& a, const Monomial& b);

/// A factor list in arbitrary order, as produced by a parser or by hand.
struct RawTerm {
  Rational coeff;
  std::vector<std::pair<Atom, std::uint32_t>> factors;  // odd atoms must have power 1
};

/// Graded-commutative differential polynomial with exact rational
/// coefficients. Always kept in canonical form: no zero coefficients and at
/// most one entry per monomial.
class DiffPoly {
 public:
  using TermMap = std::map<Monomial, Rational, MonomialLess>;

  DiffPoly() = default;
  DiffPoly(const Rational& c);  // NOLINT: constants convert implicitly
  DiffPoly(int c) : DiffPoly(Rational(c)) {}  // NOLINT

  static DiffPoly atom(const Atom& a);
  static DiffPoly monomial(Monomial m, const Rational& c = 1);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const TermMap& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  /// Value when the polynomial is a pure rational constant.
  std::optional<Rational> as_constant() const;

  int max_p_degree() const;
  int min_p_degree() const;
  bool is_p_homogeneous() const { return is_zero() || max_p_degree() == min_p_degree(); }
  /// 0 or 1 when every term has the same parity, -1 otherwise. Zero is even.
  int parity() const;

  /// Accumulates c*m, dropping the entry if it cancels.
  void add_term(const Monomial& m, const Rational& c);
  void add_term(Monomial&& m, const Rational& c);

  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const Rational& c);
  DiffPoly operator-() const;

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator*(DiffPoly a, const Rational& c) { return a *= c; }
  friend DiffPoly operator*(const Rational& c, DiffPoly a) { return a *= c; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);

  bool operator==(const DiffPoly& o) const { return terms_ == o.terms_; }

  /// Terms whose monomial satisfies `keep`.
  template <class Pred>
  DiffPoly filter(Pred keep) const {
    DiffPoly r;
    for (const auto& [m, c] : terms_)
      if (keep(m)) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

 private:
  TermMap terms_;
};

/// Canonicalizes a raw term list: sorts odd factors (tracking the sign of the
/// permutation), kills terms with a repeated odd factor, merges equal
/// monomials and drops zeros.
DiffPoly normalize(const std::vector<RawTerm>& raw);

/// x^n for a nonnegative integer n.
DiffPoly pow(const DiffPoly& x, unsigned n);

}  // namespace jetviber
