#include "support.hpp"

#include <random>

#include "generators.hpp"

using namespace jetviber;
using jetviber::testing::Fixture;

namespace {

int error_column(const std::string& text) {
  try {
    parse_session(text, "<t>");
  } catch (const ParseError& e) {
    return e.column();
  }
  return -1;
}

}  // namespace

TEST_CASE("session statements") {
  Fixture w(jetviber::testing::kWave);
  CHECK(w.s.bivector_names() == std::vector<std::string>{"B0", "B1", "B2"});
  CHECK(w.s.has_equation());
  CHECK(w.ctx().find_function("h1"));
  CHECK_THROWS_AS(w.s.bivector("h1"), Error);
  CHECK_THROWS_AS(Session().equation(), Error);
}

TEST_CASE("parse errors carry positions") {
  CHECK(error_column("indep x;\nbivector B = p[x,/];") == 18);
  try {
    parse_session("indep x;\nbivector B = q;", "s.jet");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 14);
    CHECK(std::string(e.what()).rfind("s.jet:2:14:", 0) == 0);
  }
  CHECK(error_column("indep x; bivector B = u;") > 0);
  CHECK(error_column("indep x; equation u[x] = 0; equation u = 0;") == 29);
  CHECK(error_column("indep x; bivector B = p; bivector B = p;") > 0);
  CHECK(error_column("indep x; let e = u/0;") > 0);
  CHECK(error_column("indep x; let e = u/u;") > 0);
  CHECK(error_column("indep x; function f(x); let e = pd(f, 2);") > 0);
  CHECK(error_column("indep x; expect poisson B;") > 0);
  CHECK(error_column("indep x; banana;") == 10);
}

TEST_CASE("expression elaboration") {
  Fixture f(R"(
indep x y z;
constant a;
function h(x, u[x]);
let e = u[x] + 1;
)");
  CHECK(f.e("D[x,y](u)") == f.e("u[x,y]"));
  CHECK(f.str(f.e("pd(h,2)")) == "pd(h,2)");
  CHECK(f.str(f.e("a^2*p[z,z]")) == "a^2*p[z,z]");
  CHECK(f.e("e^2") == f.e("u[x]^2 + 2*u[x] + 1"));
  CHECK(f.e("(x + y)/2") == f.e("1/2*x + 1/2*y"));
  CHECK(f.e("-(p[x] - p)") == f.e("p - p[x]"));
  CHECK(f.e("pd(h,(1,2))") == f.e("pd(h,1,2)"));
  CHECK(f.e("pd(h,2,1)") == f.e("pd(h,1,2)"));
}

TEST_CASE("canonical printing") {
  Fixture f(jetviber::testing::kWave);
  CHECK(f.str(f.e("p[x]*p[]")) == "- p[]*p[x]");
  CHECK(f.str(f.e("u[x] + u[x]")) == "2*u[x]");
  CHECK(f.str(f.e("0*u")) == "0");
  CHECK(f.str(f.e("x - 1/3*u[x,y]^2")) == "x - 1/3*u[x,y]^2");
  CHECK(f.str(f.e("p[x]*p[y] + u*p + 1")) == "p[x]*p[y] + u[]*p[] + 1");
}

TEST_CASE("instantiation blocks") {
  Fixture f(R"(
indep x;
function h(x, u[x]);
instantiate hu: h = u[x];
instantiate h = x^2;
)");
  REQUIRE(f.s.instantiations().size() == 2);
  CHECK(f.s.instantiations()[1].label == "h = x^2");
  CHECK(resolve_instantiation("hu", f.s).size() == 1);
  CHECK(resolve_instantiation("h = 3", f.s)[0].second == f.e("3"));
  CHECK_THROWS_AS(resolve_instantiation("nope", f.s), ParseError);
}

TEST_CASE("round trip on random expressions") {
  Fixture f(R"(
indep x y;
constant a;
function h(x, u[x]);
)");
  testgen::Gen g(f.ctx(), 7);
  for (int i = 0; i < 200; ++i) {
    DiffPoly e = g.mixed() * g.even(1);
    if (i % 3 == 0) e = e * f.e("a*pd(h,1,2) + h");
    const std::string s = f.str(e);
    CAPTURE(s);
    CHECK(f.e(s) == e);
    CHECK(f.str(f.e(s)) == s);
  }
}
