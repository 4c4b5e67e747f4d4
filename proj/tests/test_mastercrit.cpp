#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "arrham/hamiltonians.hpp"
#include "arrham/mastercrit.hpp"

using namespace arrham;

namespace {

ArrangementFamily pair_family(Rat a1, Rat a2) {
  ArrangementFamily f;
  f.k = 1;
  f.n = 2;
  f.b = RatMat{{Rat(1)}, {Rat(1)}};
  f.a = {a1, a2};
  return f;
}

ArrangementFamily triangle_family() {
  ArrangementFamily f;
  f.k = 2;
  f.n = 3;
  f.b = RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(-1)}};
  f.a = {Rat(1), Rat(1), Rat(1)};
  return f;
}

ArrangementFamily four_line_family() {
  ArrangementFamily f;
  f.k = 2;
  f.n = 4;
  f.b = RatMat{{Rat(0), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(0)}};
  f.a = {Rat(1), Rat(1), Rat(1), Rat(1)};
  return f;
}

}  // namespace

TEST_CASE("bounded regions of the triangle fiber") {
  auto fam = triangle_family();
  RatVec z{Rat(0), Rat(0), Rat(1)};
  auto cells = enumerate_bounded_regions(fam, z);
  REQUIRE(cells.size() == 1);
  // The open triangle: every f_j positive at the witness.
  for (int j = 0; j < 3; ++j) {
    CHECK(cells[0].sign[j] == 1);
    CHECK(sgn(fam.f(j, z, cells[0].witness)) == 1);
  }
}

TEST_CASE("bounded regions of the four-line bad fiber") {
  auto fam = four_line_family();
  RatVec z0{Rat(0), Rat(0), Rat(0), Rat(-1)};
  auto cells = enumerate_bounded_regions(fam, z0);
  CHECK(cells.size() == 2);  // two triangles through the triple point
}

TEST_CASE("bounded region of the pair fiber is the interval") {
  auto fam = pair_family(Rat(1), Rat(1));
  auto cells = enumerate_bounded_regions(fam, {Rat(0), Rat(-1)});
  REQUIRE(cells.size() == 1);
  // witness between the points 0 and 1
  CHECK(sgn(cells[0].witness[0]) > 0);
  CHECK(cells[0].witness[0] < Rat(1));
}

TEST_CASE("unbounded-only arrangements yield no cells") {
  // Two parallel lines in the plane plus a transversal still leave no
  // bounded cell; use exactly k+1 = 3 pairwise nonparallel concurrent lines.
  ArrangementFamily f;
  f.k = 2;
  f.n = 3;
  f.b = RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(1), Rat(1)}};
  f.a = {Rat(1), Rat(1), Rat(1)};
  // concurrent at the origin: central arrangement has no bounded region
  auto cells = enumerate_bounded_regions(f, {Rat(0), Rat(0), Rat(0)});
  CHECK(cells.empty());
}

TEST_CASE("critical point of the triangle") {
  auto fam = triangle_family();
  auto pts = solve_critical_points(fam, FiberPoint::from_exact({Rat(0), Rat(0), Rat(1)}));
  REQUIRE(pts.size() == 1);
  CHECK(std::fabs(pts[0].t[0] - 1.0 / 3.0) < 1e-10);
  CHECK(std::fabs(pts[0].t[1] - 1.0 / 3.0) < 1e-10);
  CHECK(pts[0].residual <= 1e-12);
  CHECK(std::fabs(pts[0].hess_det - 243.0) < 1e-6);
  CHECK(pts[0].nondegenerate);
  // Exact cross-check at the rational point (1/3, 1/3).
  RatVec t{rat_of(1, 3), rat_of(1, 3)};
  RatVec z{Rat(0), Rat(0), Rat(1)};
  CHECK(is_zero_vec(master_grad_exact(fam, z, t)));
  CHECK(master_hess_det_exact(fam, z, t) == Rat(243));
}

TEST_CASE("critical point of the pair family in closed form") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto fam = pair_family(a1, a2);
  RatVec z{Rat(0), Rat(-1)};
  auto pts = solve_critical_points(fam, FiberPoint::from_exact(z));
  REQUIRE(pts.size() == 1);
  // t* = -(a1 z2 + a2 z1)/(a1 + a2) = 2/5 for a=(2,3), z=(0,-1).
  Rat expected = -(a1 * z[1] + a2 * z[0]) / (a1 + a2);
  CHECK(expected == rat_of(2, 5));
  CHECK(std::fabs(pts[0].t[0] - rat_d(expected)) < 1e-12);
  CHECK(is_zero_vec(master_grad_exact(fam, z, {expected})));
}

TEST_CASE("two nondegenerate critical points at the four-line fiber") {
  auto fam = four_line_family();
  auto pts = solve_critical_points(fam, FiberPoint::from_exact({Rat(0), Rat(0), Rat(0), Rat(-1)}));
  REQUIRE(pts.size() == 2);
  for (const auto& p : pts) {
    CHECK(p.residual <= 1e-12);
    CHECK(p.nondegenerate);
    // Negative definite Hessian: for k=2 this is det > 0 and trace < 0.
    MasterEval e = master_eval(fam, {0, 0, 0, -1}, p.t);
    CHECK(p.hess_det > 0);
    CHECK(e.hess[0][0] + e.hess[1][1] < 0);
  }
  // positive weights: #points = #bounded regions = |chi|
  CHECK(static_cast<long>(pts.size()) ==
        std::labs(euler_characteristic(fam, FiberPoint::from_exact({Rat(0), Rat(0), Rat(0), Rat(-1)}))));
}

TEST_CASE("solver refuses mixed-sign weights") {
  auto fam = pair_family(Rat(2), Rat(-3));
  CHECK_THROWS_AS(solve_critical_points(fam, FiberPoint::from_exact({Rat(0), Rat(-1)})),
                  std::invalid_argument);
}

TEST_CASE("gradient agrees with central finite differences") {
  auto fam = four_line_family();
  std::vector<double> z{0, 0, 1, -1};
  Rng rng(77);
  int tested = 0;
  while (tested < 5) {
    std::vector<double> t{rng.int_in(-300, 300) / 100.0, rng.int_in(-300, 300) / 100.0};
    bool clear = true;
    for (int j = 0; j < fam.n; ++j)
      if (std::fabs(fam.f_d(j, z, t)) < 0.05) clear = false;
    if (!clear) continue;
    ++tested;
    MasterEval e = master_eval(fam, z, t);
    const double h = 1e-6;
    for (int i = 0; i < fam.k; ++i) {
      auto tp = t, tm = t;
      tp[i] += h;
      tm[i] -= h;
      double fd = (master_eval(fam, z, tp).value - master_eval(fam, z, tm).value) / (2 * h);
      CHECK(std::fabs(fd - e.grad[i]) <= 1e-6 * std::max(1.0, std::fabs(e.grad[i])));
    }
  }
}

TEST_CASE("special vector of the triangle") {
  auto fam = triangle_family();
  StandardBasis top = StandardBasis::build(fam, 2);
  RatVec z{Rat(0), Rat(0), Rat(1)};
  RatVec v = special_vector_exact(fam, top, z, {rat_of(1, 3), rat_of(1, 3)});
  CHECK(v[top.find({0, 1})] == Rat(9));
  CHECK(v[top.find({0, 2})] == Rat(-9));
  CHECK(v[top.find({1, 2})] == Rat(9));
  // At the critical point the special vector is singular...
  RatMat delta = weighted_differential(fam).transpose();
  CHECK(is_zero_vec(delta * v));
  // ...and at a non-critical point it is not.
  RatVec w = special_vector_exact(fam, top, z, {rat_of(1, 4), rat_of(1, 4)});
  CHECK_FALSE(is_zero_vec(delta * w));
  CHECK_THROWS_AS(special_vector_exact(fam, top, z, {Rat(0), Rat(0)}), std::domain_error);
}

TEST_CASE("special vector of the pair family lies in Sing V at the critical point") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto fam = pair_family(a1, a2);
  StandardBasis top = StandardBasis::build(fam, 1);
  RatVec z{Rat(0), Rat(-1)};
  Rat tstar = rat_of(2, 5);
  RatVec v = special_vector_exact(fam, top, z, {tstar});
  // v = (1/f1, 1/f2) is proportional to (a2, -a1).
  CHECK(v[0] * (-a1) == v[1] * a2);
}

TEST_CASE("norm identity holds exactly at random rational points") {
  auto fam = four_line_family();
  StandardBasis top = StandardBasis::build(fam, 2);
  RatVec z{Rat(0), Rat(0), Rat(1), Rat(-1)};
  RatVec gram = gram_diagonal(fam, top);
  Rng rng(13);
  int tested = 0;
  while (tested < 10) {
    RatVec t{rng.rat(4, 3), rng.rat(4, 3)};
    bool on_hyperplane = false;
    for (int j = 0; j < fam.n; ++j)
      if (is_zero(fam.f(j, z, t))) on_hyperplane = true;
    if (on_hyperplane) continue;
    ++tested;
    RatVec v = special_vector_exact(fam, top, z, t);
    Rat lhs = contravariant_pair(gram, v, v);
    Rat rhs = master_hess_det_exact(fam, z, t);  // (-1)^k = +1 for k = 2
    CHECK(lhs == rhs);
  }
}

TEST_CASE("norm identity with the sign for k = 1 (exact)") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto fam = pair_family(a1, a2);
  StandardBasis top = StandardBasis::build(fam, 1);
  RatVec z{Rat(0), Rat(-1)};
  RatVec gram = gram_diagonal(fam, top);
  RatVec t{rat_of(1, 3)};
  RatVec v = special_vector_exact(fam, top, z, t);
  CHECK(contravariant_pair(gram, v, v) == -master_hess_det_exact(fam, z, t));
}

TEST_CASE("norms and orthogonality at solved points") {
  auto fam = four_line_family();
  StandardBasis top = StandardBasis::build(fam, 2);
  auto pts = solve_critical_points(fam, FiberPoint::from_exact({Rat(0), Rat(0), Rat(0), Rat(-1)}));
  auto rep = verify_hessian_norm_and_orthogonality(fam, top, {0, 0, 0, -1}, pts);
  CHECK(rep.norm_identity);
  CHECK(rep.orthogonal);
  CHECK(rep.worst_orth_rel <= 1e-8);
}

TEST_CASE("algebra correspondence for the triangle") {
  auto fam = triangle_family();
  RatVec z{Rat(0), Rat(0), Rat(1)};
  auto pts = solve_critical_points(fam, FiberPoint::from_exact(z));
  auto rep = algebra_correspondence(fam, pts, z);
  CHECK(rep.residue_identity);
  CHECK(rep.eigenvalues_match);
  CHECK(rep.tuples_distinct);
  CHECK(rep.regular_representation);
  CHECK(rep.algebra_dim == 1);
  // eigenvalue tuple (3,3,3): a_j / f_j at (1/3,1/3)
  std::vector<double> zd{0, 0, 1};
  for (int j = 0; j < 3; ++j)
    CHECK(std::fabs(rat_d(fam.a[j]) / fam.f_d(j, zd, pts[0].t) - 3.0) < 1e-9);
}

TEST_CASE("algebra correspondence for four generic lines") {
  auto fam = four_line_family();
  RatVec z{Rat(0), Rat(0), Rat(1), Rat(-1)};  // generic fiber: 3 critical points
  auto pts = solve_critical_points(fam, FiberPoint::from_exact(z));
  REQUIRE(pts.size() == 3);
  auto rep = algebra_correspondence(fam, pts, z);
  CHECK(rep.residue_identity);
  CHECK(rep.eigenvalues_match);
  CHECK(rep.tuples_distinct);
  CHECK(rep.regular_representation);
  CHECK(rep.algebra_dim == 3);
}

TEST_CASE("pair family eigenvalue matches the hamiltonian closed form") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto fam = pair_family(a1, a2);
  RatVec z{Rat(0), Rat(-1)};
  auto pts = solve_critical_points(fam, FiberPoint::from_exact(z));
  auto rep = algebra_correspondence(fam, pts, z);
  CHECK(rep.eigenvalues_match);
  // a1 / f1(t*) = (a1 + a2)/(z1 - z2) = 5
  std::vector<double> zd{0, -1};
  CHECK(std::fabs(rat_d(a1) / fam.f_d(0, zd, pts[0].t) - 5.0) < 1e-9);
}
