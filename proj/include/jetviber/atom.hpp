#pragma once

#include <compare>
#include <cstdint>

#include "jetviber/multi_index.hpp"

namespace jetviber {

/// Kind rank doubles as the first key of the canonical atom order.
enum class AtomKind : std::uint8_t {
  IndepVar = 0,
  Const = 1,
  FunDeriv = 2,
  Tag = 3,  // internal: stands for D_tau(F) during decomposition
  JetU = 4,
  JetP = 5,
};

/// A generator of the graded jet algebra.
///
/// - IndepVar: `symbol` is the variable id.
/// - Const: `symbol` is the constant id.
/// - FunDeriv: `symbol` is the function id, `index` counts partials per
///   argument position (all zero = the function itself).
/// - Tag, JetU, JetP: `index` is the multi-index.
struct Atom {
  AtomKind kind = AtomKind::IndepVar;
  std::uint8_t symbol = 0;
  MultiIndex index;

  static Atom indep(int id) { return {AtomKind::IndepVar, static_cast<std::uint8_t>(id), {}}; }
  static Atom constant(int id) { return {AtomKind::Const, static_cast<std::uint8_t>(id), {}}; }
  static Atom function(int id, MultiIndex partials = {}) {
    return {AtomKind::FunDeriv, static_cast<std::uint8_t>(id), partials};
  }
  static Atom tag(MultiIndex tau) { return {AtomKind::Tag, 0, tau}; }
  static Atom u(MultiIndex sigma) { return {AtomKind::JetU, 0, sigma}; }
  static Atom p(MultiIndex sigma) { return {AtomKind::JetP, 0, sigma}; }

  int parity() const { return kind == AtomKind::JetP ? 1 : 0; }
  bool is_odd() const { return kind == AtomKind::JetP; }

  bool operator==(const Atom&) const = default;
  std::strong_ordering operator<=>(const Atom& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = symbol <=> o.symbol; c != 0) return c;
    return index <=> o.index;
  }
};

}  // namespace jetviber
