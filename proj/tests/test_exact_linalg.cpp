#include "doctest.h"
#include "orbitq/exact_linalg.hpp"

using namespace orbitq::exact_linalg;

TEST_CASE("gaussian rational scalar arithmetic") {
  Scalar a = Scalar::fraction(1, 2);
  Scalar b = Scalar::i();
  Scalar c = a + b * Scalar::fraction(3, 4);  // 1/2 + 3/4 i
  CHECK(c.re() == mpq_class(1, 2));
  CHECK(c.im() == mpq_class(3, 4));
  CHECK(c.conj().im() == mpq_class(-3, 4));
  CHECK(c.norm2() == mpq_class(1, 4) + mpq_class(9, 16));
  CHECK((c * c.inverse()) == Scalar(1));
  CHECK(c.str() == "1/2+3/4i");
  CHECK((-c + c).is_zero());
  CHECK(Scalar::fraction(2, 4).str() == "1/2");
}

TEST_CASE("rref, rank, inverse") {
  ExactMatrix m(3, 3);
  long vals[3][3] = {{2, 1, 1}, {4, 3, 3}, {8, 7, 9}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m.at(r, c) = Scalar(vals[r][c]);
  CHECK(m.rank() == 3);
  ExactMatrix inv = m.inverse();
  CHECK((m * inv) == ExactMatrix::identity(3));
  CHECK((inv * m) == ExactMatrix::identity(3));

  ExactMatrix singular(2, 2);
  singular.at(0, 0) = Scalar(1);
  singular.at(0, 1) = Scalar(2);
  singular.at(1, 0) = Scalar(2);
  singular.at(1, 1) = Scalar(4);
  CHECK(singular.rank() == 1);
}

TEST_CASE("kernel basis solves the homogeneous system") {
  // x + y + z = 0, x - z = 0  ->  kernel spanned by (1, -2, 1).
  ExactMatrix m(2, 3);
  m.at(0, 0) = Scalar(1);
  m.at(0, 1) = Scalar(1);
  m.at(0, 2) = Scalar(1);
  m.at(1, 0) = Scalar(1);
  m.at(1, 2) = Scalar(-1);
  ExactMatrix k = kernel_basis(m);
  REQUIRE(k.rows() == 1);
  CHECK((m * k.transpose()).is_zero());
  // Normalized: the free coordinate carries 1.
  CHECK(k.at(0, 0) * Scalar(-2) == k.at(0, 1) * Scalar(1));
}

TEST_CASE("subspace intersection") {
  // span{(1,0,0),(0,1,0)} meets span{(0,1,0),(0,0,1)} in span{(0,1,0)}.
  ExactMatrix a(2, 3), b(2, 3);
  a.at(0, 0) = Scalar(1);
  a.at(1, 1) = Scalar(1);
  b.at(0, 1) = Scalar(1);
  b.at(1, 2) = Scalar(1);
  ExactMatrix meet = intersect_subspaces(a, b);
  REQUIRE(meet.rows() == 1);
  CHECK(meet.at(0, 0).is_zero());
  CHECK(!meet.at(0, 1).is_zero());
  CHECK(meet.at(0, 2).is_zero());
}

TEST_CASE("hermitian signature by congruence") {
  ExactMatrix d(3, 3);
  d.at(0, 0) = Scalar(2);
  d.at(1, 1) = Scalar(-3);
  // d(2,2) = 0
  auto [np, nm, nz] = hermitian_signature(d);
  CHECK(np == 1);
  CHECK(nm == 1);
  CHECK(nz == 1);

  // [[2, i], [-i, 2]] has eigenvalues 1 and 3: positive definite.
  ExactMatrix h(2, 2);
  h.at(0, 0) = Scalar(2);
  h.at(0, 1) = Scalar::i();
  h.at(1, 0) = -Scalar::i();
  h.at(1, 1) = Scalar(2);
  auto [hp, hm, hz] = hermitian_signature(h);
  CHECK(hp == 2);
  CHECK(hm == 0);
  CHECK(hz == 0);

  // Off-diagonal real symmetric with a negative direction.
  ExactMatrix s(2, 2);
  s.at(0, 1) = Scalar(1);
  s.at(1, 0) = Scalar(1);
  auto [sp, sm, sz] = hermitian_signature(s);
  CHECK(sp == 1);
  CHECK(sm == 1);
  CHECK(sz == 0);

  ExactMatrix bad(2, 2);
  bad.at(0, 1) = Scalar(1);  // not hermitian
  CHECK_THROWS_AS(hermitian_signature(bad), orbitq::Error);
}
