#include "doctest.h"
#include "orbitq/poly_symplectic.hpp"

using namespace orbitq::poly_symplectic;
using orbitq::exact_linalg::ExactMatrix;
using orbitq::exact_linalg::Scalar;

namespace {

RegistryPtr tiny_registry() {
  std::vector<VarInfo> vars(4);
  const char* names[4] = {"a", "b", "c", "d"};
  for (int k = 0; k < 4; ++k) {
    vars[k].name = names[k];
    vars[k].weight = {k % 2 == 0 ? 1 : -1};
  }
  return std::make_shared<const VariableRegistry>(vars);
}

// Standard symplectic pairing on (a, b, c, d): omega(a, c) = 1, omega(b, d)
// = 1, so {f, g} uses poisson = omega^{-1}.
OmegaData standard_omega(const RegistryPtr& reg) {
  OmegaData om;
  om.registry = reg;
  om.omega = ExactMatrix(4, 4);
  om.omega.at(0, 2) = Scalar(1);
  om.omega.at(2, 0) = Scalar(-1);
  om.omega.at(1, 3) = Scalar(1);
  om.omega.at(3, 1) = Scalar(-1);
  om.poisson = om.omega.inverse();
  return om;
}

}  // namespace

TEST_CASE("polynomial ring basics") {
  auto reg = tiny_registry();
  auto a = SparsePoly::variable(reg, 0);
  auto b = SparsePoly::variable(reg, 1);
  auto f = a * a + b.scaled(Scalar::fraction(1, 2));
  CHECK(f.degree() == 2);
  CHECK(!f.is_homogeneous());
  CHECK((f - f).is_zero());
  CHECK((a * b) == (b * a));
  auto g = (a + b) * (a - b);
  CHECK(g == a * a - b * b);
  CHECK(monomial_degree(f.terms().begin()->first) >= 1);
}

TEST_CASE("monomial basis counts follow the stars-and-bars formula") {
  auto reg = tiny_registry();
  CHECK(monomial_basis(*reg, 0).size() == 1);
  CHECK(monomial_basis(*reg, 1).size() == 4);
  CHECK(monomial_basis(*reg, 2).size() == 10);
  CHECK(monomial_basis(*reg, 3).size() == 20);
  // Canonical order is strictly increasing.
  auto basis = monomial_basis(*reg, 2);
  MonomialOrder lt;
  for (std::size_t k = 1; k < basis.size(); ++k) {
    CHECK(lt(basis[k - 1], basis[k]));
  }
}

TEST_CASE("poisson bracket is antisymmetric and satisfies Leibniz/Jacobi") {
  auto reg = tiny_registry();
  auto om = standard_omega(reg);
  auto a = SparsePoly::variable(reg, 0);
  auto b = SparsePoly::variable(reg, 1);
  auto c = SparsePoly::variable(reg, 2);
  auto d = SparsePoly::variable(reg, 3);

  // Coordinate brackets come straight from the poisson tensor.
  CHECK(poisson_bracket(a, c, om) ==
        SparsePoly::constant(reg, om.poisson.at(0, 2)));

  auto f = a * a + b * c;
  auto g = c * d + a.scaled(Scalar(3));
  auto h = b * b - a * d;

  CHECK(poisson_bracket(f, g, om) == -poisson_bracket(g, f, om));

  // Leibniz: {f, gh} = {f, g} h + g {f, h}.
  CHECK(poisson_bracket(f, g * h, om) ==
        poisson_bracket(f, g, om) * h + g * poisson_bracket(f, h, om));

  // Jacobi: {f, {g, h}} + {g, {h, f}} + {h, {f, g}} = 0.
  auto jacobi = poisson_bracket(f, poisson_bracket(g, h, om), om) +
                poisson_bracket(g, poisson_bracket(h, f, om), om) +
                poisson_bracket(h, poisson_bracket(f, g, om), om);
  CHECK(jacobi.is_zero());

  // Bracket of homogeneous polynomials drops total degree by two.
  auto fg = poisson_bracket(a * a * b, c * d, om);
  CHECK(fg.degree() == 3);
}

TEST_CASE("linear substitution and coefficient conjugation") {
  auto reg = tiny_registry();
  auto a = SparsePoly::variable(reg, 0);
  auto b = SparsePoly::variable(reg, 1);

  // a -> a + b, b -> b, c -> c, d -> d.
  ExactMatrix images = ExactMatrix::identity(4);
  images.at(0, 1) = Scalar(1);
  auto f = a * a;
  auto sub = f.linear_substitute(images, reg);
  auto expect = (a + b) * (a + b);
  CHECK(sub == expect);

  auto g = a.scaled(Scalar::i());
  CHECK(g.conj_coefficients() == a.scaled(-Scalar::i()));
}

TEST_CASE("coordinate rows over an indexed monomial list") {
  auto reg = tiny_registry();
  auto basis = monomial_basis(*reg, 2);
  std::map<Monomial, std::size_t, MonomialOrder> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index[basis[k]] = k;

  auto a = SparsePoly::variable(reg, 0);
  auto b = SparsePoly::variable(reg, 1);
  auto f = a * b.scaled(Scalar(2)) - a * a;
  auto row = coords_of(f, index);
  REQUIRE(row.size() == basis.size());
  int nonzero = 0;
  for (const auto& c : row) {
    if (!c.is_zero()) ++nonzero;
  }
  CHECK(nonzero == 2);

  auto c3 = SparsePoly::variable(reg, 2);
  CHECK_THROWS_AS(coords_of(c3, index), orbitq::Error);  // wrong degree
}
