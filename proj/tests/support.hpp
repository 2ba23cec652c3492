#pragma once

#include <string>

#include "doctest.h"
#include "jetviber/lang.hpp"

namespace jetviber::testing {

inline Session session(const std::string& text) { return parse_session(text, "<test>"); }

struct Fixture {
  Session s;
  explicit Fixture(const std::string& text) : s(session(text)) {}
  DiffPoly e(const std::string& t) const { return parse_expression(t, s); }
  std::string str(const DiffPoly& d) const { return print_canonical(d, s.ctx()); }
  const Context& ctx() const { return s.ctx(); }
  const EquationModel& eq() const { return s.equation(); }
  Atom atom(const std::string& t) const {
    const DiffPoly d = e(t);
    REQUIRE(d.size() == 1);
    const Monomial& m = d.begin()->first;
    if (!m.odd.empty()) return Atom::p(m.odd[0]);
    return m.even[0].first;
  }
};

inline const char* kWave = R"(
indep x y;
function h1(x, u[x]);
function h2(y, u[y]);
equation u[x,y] = 0 solve u[x,y];
bivector B0 = p;
bivector B1 = 1/2*D[x](h1)*p[x] + h1*p[x,x];
bivector B2 = 1/2*D[y](h2)*p[y] + h2*p[y,y];
)";

inline const char* kLaplace2 = R"(
indep x y;
equation u[x,x] + u[y,y] = 0 solve u[x,x];
)";

inline const char* kUxyz = R"(
indep x y z;
function h(x);
function g(x, y, u[x,y]);
equation u[x,y,z] = 0 solve u[x,y,z];
bivector B1 = h*p[x];
bivector B2 = pd(h,1)*p[x,x] + h*p[x,x,x];
bivector B3 = 1/2*D[x](g)*p[x,y] + g*p[x,x,y];
)";

}  // namespace jetviber::testing
