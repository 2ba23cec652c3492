#include "support.hpp"

#include "jetviber/operators.hpp"

using namespace jetviber;
using jetviber::testing::Fixture;

namespace {

const MultiIndex X = MultiIndex::unit(0), Y = MultiIndex::unit(1);

Fixture wave() { return Fixture(jetviber::testing::kWave); }

CDiffOp derivative(const MultiIndex& s, Slot slot = Slot::P) { return CDiffOp::derivative(s, slot); }

}  // namespace

TEST_CASE("apply") {
  auto f = wave();
  CHECK(op_apply(derivative(X + Y), f.e("p"), f.ctx()) == f.e("p[x,y]"));
  CHECK(op_apply(CDiffOp::identity(), f.e("p"), f.ctx()) == f.e("p"));
  CDiffOp h;
  h.add(X, f.e("1/2*D[x](h1)"));
  h.add(X + X, f.e("h1"));
  CHECK(op_apply(h, f.e("p"), f.ctx()) == f.e("1/2*D[x](h1)*p[x] + h1*p[x,x]"));
  CHECK_THROWS_AS(op_apply(h, f.e("u"), f.ctx()), ParityError);
  CHECK_THROWS_AS(op_apply(derivative(X, Slot::U), f.e("p"), f.ctx()), ParityError);
}

TEST_CASE("compose") {
  auto f = wave();
  const CDiffOp m = CDiffOp::multiplication(f.e("u[x]"), Slot::U);
  CDiffOp want(Slot::U);
  want.add(X, f.e("u[x]"));
  want.add({}, f.e("u[x,x]"));
  CHECK(op_compose(derivative(X, Slot::U), m, f.ctx()) == want);
  CHECK(op_compose(derivative(X + Y), CDiffOp::identity(), f.ctx()) == derivative(X + Y));
  CHECK(op_compose(derivative(X), derivative(X), f.ctx()) == derivative(X + X));
}

TEST_CASE("adjoint") {
  auto f = wave();
  CHECK(op_adjoint(derivative(X), f.ctx()) == derivative(X) * Rational(-1));
  CHECK(op_adjoint(derivative(X + Y), f.ctx()) == derivative(X + Y));
  CDiffOp a(Slot::U);
  a.add(X, f.e("u[x]"));
  CDiffOp want(Slot::U);
  want.add(X, f.e("-u[x]"));
  want.add({}, f.e("-u[x,x]"));
  CHECK(op_adjoint(a, f.ctx()) == want);
  CDiffOp odd;
  odd.add(X, f.e("p"));
  CHECK_THROWS_AS(op_adjoint(odd, f.ctx()), Error);
}

TEST_CASE("from p-linear") {
  auto f = wave();
  const CDiffOp h = op_from_p_linear(f.e("1/2*D[x](h1)*p[x] + h1*p[x,x]"));
  CHECK(h.coefficient(X) == f.e("1/2*D[x](h1)"));
  CHECK(h.coefficient(X + X) == f.e("h1"));
  CHECK(h.order() == 2);
  CHECK(op_from_p_linear(f.e("p")) == CDiffOp::identity());
  const CDiffOp m = op_from_p_linear(f.e("u[x]*p + p[x,y]"));
  CHECK(m.coefficient({}) == f.e("u[x]"));
  CHECK(m.coefficient(X + Y) == 1);
  CHECK_THROWS_AS(op_from_p_linear(f.e("p*p[x]")), Error);
  CHECK_THROWS_AS(op_from_p_linear(f.e("u[x]")), Error);
}

TEST_CASE("bi-differential operators") {
  auto f = wave();
  BiDiffOp n;
  n.add({}, f.e("p[x]"));
  n.add(X, f.e("u*p"));
  CHECK(biop_apply(n, f.e("u[y]"), f.ctx()) == f.e("u[y]*p[x] + u[x,y]*u*p"));
  // (D_x(q) u p)^{*1} = -D_x(q u p) = -D_x(q) u p - q u[x] p - q u p[x]
  const BiDiffOp a = biop_adjoint_first(n, f.ctx());
  CHECK(a.component(X) == f.e("-u*p"));
  CHECK(a.component({}) == f.e("p[x] - u[x]*p - u*p[x]"));
  CHECK(biop_adjoint_first(a, f.ctx()) == n);
}
