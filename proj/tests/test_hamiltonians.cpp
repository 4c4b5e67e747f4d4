#include <doctest.h>

#include <cmath>

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

// S L_C must be symmetric: the circuit operators are self-adjoint for the
// contravariant form.
void check_symmetric_wrt_gram(const RatVec& gram, const RatMat& op) {
  RatMat sm(op.rows(), op.cols());
  for (int i = 0; i < op.rows(); ++i)
    for (int j = 0; j < op.cols(); ++j) sm.at(i, j) = gram[i] * op.at(i, j);
  CHECK(sm.is_symmetric());
}

}  // namespace

TEST_CASE("circuit operator of the pair family") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto fam = pair_family(a1, a2);
  auto hf = HamiltonianFamily::build(fam);
  REQUIRE(hf.circuits.size() == 1);
  const RatMat& lc = hf.lc[0];
  // L_C F(H1) = a2 F(H1) - a1 F(H2);  L_C F(H2) = -a2 F(H1) + a1 F(H2).
  CHECK(lc.at(0, 0) == a2);
  CHECK(lc.at(1, 0) == -a1);
  CHECK(lc.at(0, 1) == -a2);
  CHECK(lc.at(1, 1) == a1);
  // Kernel holds the degenerate-fiber subspace F(H1) + F(H2).
  CHECK(is_zero_vec(lc * RatVec{Rat(1), Rat(1)}));
  // Singular vector is an eigenvector with eigenvalue a1 + a2.
  RatVec v{a2, -a1};
  CHECK(lc * v == scale_vec(a1 + a2, v));
  check_symmetric_wrt_gram(hf.gram, lc);
}

TEST_CASE("circuit operator of the triangle, full 3x3 expansion") {
  auto hf = HamiltonianFamily::build(triangle_family());
  REQUIRE(hf.circuits.size() == 1);
  // Hand expansion for C = {1,2,3}, unit weights, basis {12},{13},{23}:
  // each column is (1,-1,1) up to the (-1)^m sign of the deleted index.
  RatMat expected{{Rat(1), Rat(-1), Rat(1)},
                  {Rat(-1), Rat(1), Rat(-1)},
                  {Rat(1), Rat(-1), Rat(1)}};
  CHECK(hf.lc[0] == expected);
  check_symmetric_wrt_gram(hf.gram, hf.lc[0]);
  // Eigenvector (1,-1,1) with eigenvalue a1+a2+a3 = 3.
  RatVec v{Rat(1), Rat(-1), Rat(1)};
  CHECK(hf.lc[0] * v == scale_vec(Rat(3), v));
}

TEST_CASE("circuit operators stay symmetric on random families") {
  Rng rng(23);
  for (int trial = 0; trial < 6; ++trial) {
    ArrangementFamily f;
    f.k = 2;
    f.n = 5;
    for (;;) {
      f.b = RatMat(f.n, f.k);
      for (int j = 0; j < f.n; ++j)
        for (int i = 0; i < f.k; ++i) f.b.at(j, i) = rng.rat(3, 2);
      bool rows_ok = true;
      for (int j = 0; j < f.n; ++j)
        if (is_zero_vec(f.b.row(j))) rows_ok = false;
      if (rows_ok && f.b.rank() == f.k) break;
    }
    f.a.clear();
    for (int j = 0; j < f.n; ++j) f.a.push_back(rng.nonzero_rat(4, 3));
    auto hf = HamiltonianFamily::build(f);
    for (const auto& lc : hf.lc) check_symmetric_wrt_gram(hf.gram, lc);
  }
}

TEST_CASE("hamiltonians of the pair family") {
  Rat a1 = rat_from_string("2"), a2 = rat_from_string("3");
  auto hf = HamiltonianFamily::build(pair_family(a1, a2));
  RatVec z{Rat(0), Rat(-1)};
  RatMat k1 = hf.k_at(z, 0);
  RatMat k2 = hf.k_at(z, 1);
  // K1 = L_C / (z1 - z2), K2 = -K1.
  CHECK(k1 == hf.lc[0].scaled(Rat(1) / (z[0] - z[1])));
  CHECK((k1 + k2).is_zero());
  // Eigenvalue (a1+a2)/(z1-z2) on Sing V.
  RatVec v{a2, -a1};
  CHECK(k1 * v == scale_vec((a1 + a2) / (z[0] - z[1]), v));
  // Bad fiber is rejected with a pointer to the split.
  CHECK_THROWS_AS(hf.k_at({Rat(2), Rat(2)}, 0), std::domain_error);
}

TEST_CASE("hamiltonians of the triangle at z=(0,0,1)") {
  auto hf = HamiltonianFamily::build(triangle_family());
  RatVec z{Rat(0), Rat(0), Rat(1)};
  CHECK(hf.k_at(z, 2) == hf.lc[0]);  // lambda_3 / f_C = 1 / 1
  auto sing = sing_basis(hf.fam);
  auto rep = verify_flatness(hf, z, 0, 1, sing.vectors);
  CHECK(rep.curvature_zero);
  CHECK(rep.commute_on_sing);
}

TEST_CASE("flatness and commutativity at seeded good fibers of four generic lines") {
  auto hf = HamiltonianFamily::build(four_line_family());
  auto sing = sing_basis(hf.fam);
  REQUIRE(sing.dim() == 3);
  Rng rng(5);
  int tested = 0;
  while (tested < 4) {
    RatVec z;
    for (int j = 0; j < 4; ++j) z.push_back(rng.rat(5, 3));
    bool good = true;
    for (const auto& c : hf.circuits)
      if (is_zero(c.f_C(z))) good = false;
    if (!good) continue;
    ++tested;
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        auto rep = verify_flatness(hf, z, i, j, sing.vectors);
        CHECK(rep.curvature_zero);
        CHECK(rep.commute_on_sing);
      }
    // K_j preserves Sing V and is symmetric for the contravariant form.
    RatSpan span;
    for (const auto& v : sing.vectors) span.insert(v);
    for (int j = 0; j < 4; ++j) {
      RatMat kj = hf.k_at(z, j);
      check_symmetric_wrt_gram(hf.gram, kj);
      for (const auto& v : sing.vectors) CHECK(span.contains(kj * v));
    }
  }
}

TEST_CASE("split at the four-line bad fiber") {
  auto hf = HamiltonianFamily::build(four_line_family());
  RatVec z0{Rat(0), Rat(0), Rat(0), Rat(-1)};
  auto vanish = hf.vanishing_set(z0);
  REQUIRE(vanish.size() == 1);
  CHECK(hf.circuits[vanish[0]].support == std::vector<int>{0, 1, 2});

  auto tangent = tangent_directions(hf, z0);
  CHECK(tangent.size() == 3);
  // The stratum is cut out by a covector proportional to (-2, 1, 1, 0).
  RatVec covector{Rat(-2), Rat(1), Rat(1), Rat(0)};
  for (const auto& xi : tangent) CHECK(is_zero(dot(covector, xi)));

  // K^1 at z0 only sums the three non-vanishing circuits and K_xi
  // preserves F^2(A(z0)).
  auto circuits = enumerate_circuits(hf.fam);
  auto deg = degenerate_subspaces(hf.fam, circuits, FiberPoint::from_exact(z0));
  RatVec dz4{Rat(0), Rat(0), Rat(0), Rat(1)};
  RatMat kxi = naive_hamiltonian(hf, dz4, z0, deg.f_basis);
  RatMat expected(hf.top.size(), hf.top.size());
  for (size_t ci = 0; ci < hf.circuits.size(); ++ci) {
    if (static_cast<int>(ci) == vanish[0]) continue;
    Rat lam;
    const auto& c = hf.circuits[ci];
    for (size_t q = 0; q < c.support.size(); ++q)
      if (c.support[q] == 3) lam = c.syzygy[q];
    if (is_zero(lam)) continue;
    expected = expected + hf.lc[ci].scaled(lam / c.f_C(z0));
  }
  CHECK(kxi == expected);
  // Non-tangent directions are rejected.
  CHECK_THROWS_AS(naive_hamiltonian(hf, RatVec{Rat(1), Rat(0), Rat(0), Rat(0)}, z0, deg.f_basis),
                  std::invalid_argument);

  // F^2(A(z0)) lies in ker L_C for the vanishing circuit.
  for (const auto& v : deg.f_basis) CHECK(is_zero_vec(hf.lc[vanish[0]] * v));
}

TEST_CASE("pair family at the doubled point: regular parts vanish") {
  auto hf = HamiltonianFamily::build(pair_family(Rat(2), Rat(3)));
  RatVec z0{Rat(2), Rat(2)};
  CHECK(hf.k1_at(z0, 0).is_zero());
  CHECK(hf.k1_at(z0, 1).is_zero());
  auto tangent = tangent_directions(hf, z0);
  REQUIRE(tangent.size() == 1);
  CHECK(tangent[0][0] == tangent[0][1]);  // nullspace of (1,-1)
}

TEST_CASE("regularized hamiltonians at the four-line fiber") {
  auto fam = four_line_family();
  auto hf = HamiltonianFamily::build(fam);
  RatVec z0{Rat(0), Rat(0), Rat(0), Rat(-1)};
  auto circuits = enumerate_circuits(fam);
  auto deg = degenerate_subspaces(fam, circuits, FiberPoint::from_exact(z0));
  REQUIRE(deg.sing.dim() == 2);
  auto regs = regularized_hamiltonians(hf, z0, deg.sing.vectors);
  REQUIRE(regs.size() == 4);
  // Restricted Gram for the symmetry check.
  RatMat g(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      g.at(i, j) = contravariant_pair(hf.gram, deg.sing.vectors[i], deg.sing.vectors[j]);
  for (int i = 0; i < 4; ++i) {
    CHECK((g * regs[i]).is_symmetric());
    for (int j = i + 1; j < 4; ++j) CHECK((regs[i] * regs[j] - regs[j] * regs[i]).is_zero());
  }

  // Joint eigenvectors are the special vectors of the two triangle critical
  // points, with eigenvalues a_j / f_j(z0, p).
  auto pts = solve_critical_points(fam, FiberPoint::from_exact(z0));
  REQUIRE(pts.size() == 2);
  std::vector<double> z0d{0, 0, 0, -1};
  for (const auto& p : pts) {
    std::vector<double> v = special_vector_d(fam, hf.top, z0d, p.t);
    // coordinates of v in the sing basis by least squares
    double m00 = 0, m01 = 0, m11 = 0, r0 = 0, r1 = 0;
    std::vector<double> b0, b1;
    for (const auto& x : deg.sing.vectors[0]) b0.push_back(rat_d(x));
    for (const auto& x : deg.sing.vectors[1]) b1.push_back(rat_d(x));
    for (size_t q = 0; q < v.size(); ++q) {
      m00 += b0[q] * b0[q];
      m01 += b0[q] * b1[q];
      m11 += b1[q] * b1[q];
      r0 += b0[q] * v[q];
      r1 += b1[q] * v[q];
    }
    double det = m00 * m11 - m01 * m01;
    double c0 = (r0 * m11 - r1 * m01) / det;
    double c1 = (m00 * r1 - m01 * r0) / det;
    // v lies in Sing F^2(A(z0))
    double resid = 0, vnorm = 0;
    for (size_t q = 0; q < v.size(); ++q) {
      resid = std::max(resid, std::fabs(c0 * b0[q] + c1 * b1[q] - v[q]));
      vnorm = std::max(vnorm, std::fabs(v[q]));
    }
    CHECK(resid <= 1e-8 * vnorm);
    for (int j = 0; j < 4; ++j) {
      double eig = rat_d(fam.a[j]) / fam.f_d(j, z0d, p.t);
      double e0 = rat_d(regs[j].at(0, 0)) * c0 + rat_d(regs[j].at(0, 1)) * c1;
      double e1 = rat_d(regs[j].at(1, 0)) * c0 + rat_d(regs[j].at(1, 1)) * c1;
      CHECK(std::fabs(e0 - eig * c0) <= 1e-8 * std::max(1.0, std::fabs(eig)));
      CHECK(std::fabs(e1 - eig * c1) <= 1e-8 * std::max(1.0, std::fabs(eig)));
    }
  }

  // A good fiber must be rejected.
  CHECK_THROWS_AS(regularized_hamiltonians(hf, RatVec{Rat(0), Rat(0), Rat(1), Rat(-1)},
                                           deg.sing.vectors),
                  std::invalid_argument);
}

TEST_CASE("regularized hamiltonians on a trivial singular space") {
  auto hf = HamiltonianFamily::build(pair_family(Rat(2), Rat(3)));
  RatVec z0{Rat(2), Rat(2)};
  auto circuits = enumerate_circuits(hf.fam);
  auto deg = degenerate_subspaces(hf.fam, circuits, FiberPoint::from_exact(z0));
  CHECK(deg.sing.dim() == 0);
  auto regs = regularized_hamiltonians(hf, z0, deg.sing.vectors);
  REQUIRE(regs.size() == 2);
  CHECK(regs[0].rows() == 0);
}
