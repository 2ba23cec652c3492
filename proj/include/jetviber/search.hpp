#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jetviber/schouten.hpp"

namespace jetviber {

/// Polynomial ansatz sum_{slot, mono} c * mono * p_slot with unknown
/// rational c. Unknown k is (slot k / basis.size(), basis k % basis.size()).
struct Ansatz {
  std::vector<MultiIndex> slots;
  std::vector<Atom> vars;
  std::vector<Monomial> basis;

  std::size_t unknowns() const { return slots.size() * basis.size(); }
  DiffPoly element(std::size_t k) const;
  DiffPoly combine(const std::vector<Integer>& coeffs) const;
  /// Coefficient vector of a p-linear expression, or nullopt when it lies
  /// outside the ansatz.
  std::optional<std::vector<Rational>> coordinates(const DiffPoly& hu) const;
};

/// Slots p_s with |s| <= max_jet_order that are not reducible on T*E, and
/// every monomial of degree <= degree in `vars`.
Ansatz build_ansatz(const EquationModel& eq, int max_jet_order, std::vector<Atom> vars, int degree);

/// Sparse homogeneous linear system on the ansatz unknowns.
struct DeterminingSystem {
  struct Row {
    int condition = 0;  // 2 or 3
    Monomial key;
    std::vector<std::pair<std::size_t, Rational>> entries;
  };
  std::size_t columns = 0;
  std::vector<Row> rows;
};

DeterminingSystem determining_system(const Ansatz& ansatz, const EquationModel& eq);

/// Row echelon form over the integers, built incrementally with
/// fraction-free elimination.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t columns) : columns_(columns) {}
  /// Returns true when the row increased the rank.
  bool insert(std::vector<Integer> row);
  bool contains(std::vector<Integer> row) const;
  std::size_t rank() const { return rows_.size(); }
  std::size_t columns() const { return columns_; }
  /// Integer basis of the right kernel, each with content 1 and a positive
  /// leading entry.
  std::vector<std::vector<Integer>> kernel() const;

 private:
  void reduce(std::vector<Integer>& row) const;
  std::size_t columns_;
  std::vector<std::vector<Integer>> rows_;
  std::vector<std::size_t> pivots_;
};

/// Clears denominators and divides by the content; sign is kept.
std::vector<Integer> primitive(const std::vector<Rational>& v);
void make_primitive(std::vector<Integer>& v);

std::vector<std::vector<Integer>> nullspace(const DeterminingSystem& sys);

class InternalError : public Error {
 public:
  using Error::Error;
};

struct SearchResult {
  Ansatz ansatz;
  std::size_t rows = 0;
  std::vector<std::vector<Integer>> kernel;
  std::vector<Bivector> basis;  // re-verified, named S1, S2, ...
};

/// Ansatz, determining system, nullspace and verification of each kernel
/// vector. Throws InternalError if a kernel vector fails check_bivector.
SearchResult search_bivectors(const EquationModel& eq, int max_jet_order, std::vector<Atom> vars, int degree);

struct Membership {
  bool contained = false;
  std::string reason;  // why not, when not
};
Membership span_contains(const SearchResult& result, const DiffPoly& hu);

}  // namespace jetviber
