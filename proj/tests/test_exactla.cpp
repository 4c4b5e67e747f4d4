#include <doctest.h>

#include "arrham/polyroots.hpp"
#include "arrham/ratmat.hpp"

using namespace arrham;

TEST_CASE("rational parsing and printing round-trip") {
  Rat r = rat_from_string("-4/6");
  CHECK(r == rat_of(-2, 3));
  CHECK(rat_str(r) == "-2/3");
  CHECK(rat_from_string(rat_str(r)) == r);
  CHECK(rat_str(rat_from_string("243")) == "243/1");
  CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(rat_from_string("abc"), std::invalid_argument);
}

TEST_CASE("rref, rank and kernel on a hand-solved 2x3 system") {
  // rows (1,0), (0,1), (-1,-1): kernel of the transpose map is (1,1,1).
  RatMat m{{Rat(1), Rat(0), Rat(-1)}, {Rat(0), Rat(1), Rat(-1)}};
  CHECK(m.rank() == 2);
  auto ker = m.kernel();
  REQUIRE(ker.size() == 1);
  CHECK(normalize_int_vec(ker[0]) == RatVec{Rat(1), Rat(1), Rat(1)});
}

TEST_CASE("determinant, inverse and charpoly of a 3x3 matrix") {
  RatMat m{{Rat(2), Rat(1), Rat(0)}, {Rat(1), Rat(3), Rat(1)}, {Rat(0), Rat(1), Rat(2)}};
  // det = 2*(6-1) - 1*(2-0) = 8 by cofactor expansion.
  CHECK(m.det() == Rat(8));
  CHECK(m * m.inverse() == RatMat::identity(3));
  // charpoly: x^3 - 7x^2 + 14x - 8 (trace 7, sum of 2x2 principal minors 14).
  RatVec cp = m.charpoly();
  CHECK(cp == RatVec{Rat(-8), Rat(14), Rat(-7), Rat(1)});
  auto roots = poly_roots(cp);
  REQUIRE(roots.size() == 3);
  // Roots of (x-1)(x-2)(x-4).
  std::vector<Cplx> expected{{1, 0}, {2, 0}, {4, 0}};
  CHECK(multisets_match(roots, expected, 1e-9));
}

TEST_CASE("solve reports inconsistency exactly") {
  RatMat m{{Rat(1), Rat(1)}, {Rat(2), Rat(2)}};
  RatVec x;
  CHECK(m.solve({Rat(1), Rat(2)}, &x));
  CHECK_FALSE(m.solve({Rat(1), Rat(3)}, &x));
}

TEST_CASE("span membership and algebra dimension") {
  RatSpan span;
  CHECK(span.insert({Rat(1), Rat(0), Rat(1)}));
  CHECK(span.insert({Rat(0), Rat(1), Rat(0)}));
  CHECK_FALSE(span.insert({Rat(2), Rat(3), Rat(2)}));
  CHECK(span.dim() == 2);
  CHECK(span.contains({Rat(1), Rat(1), Rat(1)}));
  CHECK_FALSE(span.contains({Rat(1), Rat(0), Rat(0)}));

  // Two commuting diagonal operators with 3 distinct joint eigenvalue
  // columns generate the full diagonal algebra: dimension 3.
  RatMat d1{{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(2), Rat(0)}, {Rat(0), Rat(0), Rat(3)}};
  RatMat d2 = RatMat::identity(3);
  CHECK(generated_algebra_dimension({d1, d2}) == 3);
  // A single scalar operator generates only the identity line.
  CHECK(generated_algebra_dimension({RatMat::identity(3)}) == 1);
}

TEST_CASE("restrict_operator demands invariance") {
  RatMat rot{{Rat(0), Rat(-1)}, {Rat(1), Rat(0)}};
  std::vector<RatVec> line{{Rat(1), Rat(0)}};
  CHECK_THROWS_AS(restrict_operator(rot, line), std::domain_error);
  RatMat diag{{Rat(5), Rat(0)}, {Rat(0), Rat(7)}};
  RatMat r = restrict_operator(diag, line);
  CHECK(r.at(0, 0) == Rat(5));
}

TEST_CASE("durand-kerner finds a quadratic's roots") {
  // 3t^2 - 8t + 3: roots (4 +- sqrt(7))/3.
  RatPoly p{Rat(3), Rat(-8), Rat(3)};
  auto roots = poly_roots(p);
  double s7 = std::sqrt(7.0);
  std::vector<Cplx> expected{{(4 + s7) / 3, 0}, {(4 - s7) / 3, 0}};
  CHECK(multisets_match(roots, expected, 1e-10));
}
