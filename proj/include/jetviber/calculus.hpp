#pragma once

#include <set>
#include <utility>
#include <vector>

#include "jetviber/context.hpp"
#include "jetviber/diff_poly.hpp"

namespace jetviber {

/// Partial derivative by a single atom. For an odd atom this is the left
/// derivative: the atom is moved to the front before it is removed.
/// Function symbols are differentiated through their declared arguments.
DiffPoly partial_derivative(const DiffPoly& e, const Atom& a, const Context& ctx);

/// Total derivative D_i: the even derivation with D_i(u_s) = u_{s+i},
/// D_i(p_s) = p_{s+i}, D_i(x^j) = delta_ij and the chain rule on function
/// symbols. Tags shift like jets.
DiffPoly total_derivative(const DiffPoly& e, std::size_t var, const Context& ctx);

/// D_sigma, the composition of total derivatives.
DiffPoly total_derivative(const DiffPoly& e, const MultiIndex& sigma, const Context& ctx);

/// Total derivative of a single atom.
DiffPoly total_derivative(const Atom& a, std::size_t var, const Context& ctx);

/// Simultaneous substitution. Keys are atoms; a key `Atom::function(f)`
/// (no partials) replaces the function symbol f everywhere, its partial
/// derivatives becoming the explicit partials of the replacement. Even atoms
/// must map to even polynomials and odd atoms to p-linear ones.
using Bindings = std::vector<std::pair<Atom, DiffPoly>>;
DiffPoly substitute(const DiffPoly& e, const Bindings& bindings, const Context& ctx);

/// Terms in which every odd atom p_s has |s| <= max_order.
DiffPoly grade_filter(const DiffPoly& e, int max_order);
/// Terms containing some odd atom p_s with |s| > max_order.
DiffPoly grade_filter_complement(const DiffPoly& e, int max_order);

/// Multi-indices of the u-jets e depends on, explicitly or through the
/// declared arguments of its function symbols.
std::set<MultiIndex> u_dependencies(const DiffPoly& e, const Context& ctx);
/// Multi-indices of the p-jets occurring in e.
std::set<MultiIndex> p_dependencies(const DiffPoly& e);

/// True when e contains any u-jet (explicitly or via function arguments).
bool depends_on_u(const DiffPoly& e, const Context& ctx);

}  // namespace jetviber
