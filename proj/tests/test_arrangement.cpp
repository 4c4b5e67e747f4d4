#include <doctest.h>

#include <functional>

#include "arrham/arrangement.hpp"

using namespace arrham;

namespace {

ArrangementFamily pair_family(Rat a1 = Rat(1), Rat a2 = Rat(1)) {
  ArrangementFamily f;
  f.k = 1;
  f.n = 2;
  f.b = RatMat{{Rat(1)}, {Rat(1)}};
  f.a = {a1, a2};
  return f;
}

ArrangementFamily triangle_family(RatVec a = {Rat(1), Rat(1), Rat(1)}) {
  ArrangementFamily f;
  f.k = 2;
  f.n = 3;
  f.b = RatMat{{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(-1)}};
  f.a = std::move(a);
  return f;
}

// Lines y, y-x, y+x, x-1 at z0 = (0,0,0,-1): three lines through the origin
// plus a transversal.
ArrangementFamily four_line_family() {
  ArrangementFamily f;
  f.k = 2;
  f.n = 4;
  f.b = RatMat{{Rat(0), Rat(1)}, {Rat(-1), Rat(1)}, {Rat(1), Rat(1)}, {Rat(1), Rat(0)}};
  f.a = {Rat(1), Rat(1), Rat(1), Rat(1)};
  return f;
}

}  // namespace

TEST_CASE("circuit enumeration: pair of equal vectors") {
  auto circuits = enumerate_circuits(pair_family());
  REQUIRE(circuits.size() == 1);
  CHECK(circuits[0].support == std::vector<int>{0, 1});
  CHECK(circuits[0].syzygy == RatVec{Rat(1), Rat(-1)});
}

TEST_CASE("circuit enumeration: triangle has the single full circuit") {
  auto circuits = enumerate_circuits(triangle_family());
  REQUIRE(circuits.size() == 1);
  CHECK(circuits[0].support == std::vector<int>{0, 1, 2});
  CHECK(circuits[0].syzygy == RatVec{Rat(1), Rat(1), Rat(1)});
}

TEST_CASE("circuit enumeration: two parallel translates of -t") {
  // The k=1 discriminantal shape: two copies of the linear part -t.
  ArrangementFamily f;
  f.k = 1;
  f.n = 2;
  f.b = RatMat{{Rat(-1)}, {Rat(-1)}};
  f.a = {Rat(-1), Rat(-1)};
  auto circuits = enumerate_circuits(f);
  REQUIRE(circuits.size() == 1);
  CHECK(circuits[0].support == std::vector<int>{0, 1});
  CHECK(circuits[0].syzygy == RatVec{Rat(1), Rat(-1)});
}

TEST_CASE("circuit syzygies are exact and minimal") {
  auto fam = four_line_family();
  auto circuits = enumerate_circuits(fam);
  CHECK(circuits.size() == 4);  // all four 3-subsets of pairwise independent lines
  for (const auto& c : circuits) {
    // sum lambda_i b_i = 0 exactly
    RatVec acc(fam.k);
    for (size_t q = 0; q < c.support.size(); ++q)
      acc = axpy(c.syzygy[q], fam.b.row(c.support[q]), acc);
    CHECK(is_zero_vec(acc));
    CHECK(c.syzygy[0] == Rat(1));
    // every proper subset independent
    for (size_t drop = 0; drop < c.support.size(); ++drop) {
      std::vector<RatVec> rows;
      for (size_t q = 0; q < c.support.size(); ++q)
        if (q != drop) rows.push_back(fam.b.row(c.support[q]));
      CHECK(RatMat::from_rows(rows).rank() == static_cast<int>(rows.size()));
    }
  }
}

TEST_CASE("fiber classification") {
  auto tri = triangle_family();
  auto circuits = enumerate_circuits(tri);
  auto good = classify_fiber(tri, circuits, FiberPoint::from_exact({Rat(0), Rat(0), Rat(1)}));
  CHECK(good.good);
  auto bad = classify_fiber(tri, circuits, FiberPoint::from_exact({Rat(0), Rat(0), Rat(0)}));
  CHECK_FALSE(bad.good);
  REQUIRE(bad.vanishing_circuits.size() == 1);
  CHECK(bad.vanishing_circuits[0].support == std::vector<int>{0, 1, 2});

  auto pf = pair_family();
  auto pc = enumerate_circuits(pf);
  CHECK(classify_fiber(pf, pc, FiberPoint::from_exact({Rat(3), Rat(5)})).good);
  CHECK_THROWS_AS(classify_fiber(pf, pc, FiberPoint::from_doubles({3.0, 5.0})),
                  std::invalid_argument);
}

TEST_CASE("classification agrees with the direct rank/consistency predicate") {
  // Oracle: a fiber is good iff every dependent subset of size <= k+1 has an
  // inconsistent affine system (no common point).
  auto direct_good = [](const ArrangementFamily& fam, const RatVec& z) {
    std::vector<int> idx;
    std::function<bool(int, int)> rec = [&](int start, int want) -> bool {
      if (want == 0) {
        std::vector<RatVec> rows;
        RatVec rhs;
        for (int j : idx) {
          rows.push_back(fam.b.row(j));
          rhs.push_back(-z[j]);
        }
        RatMat m = RatMat::from_rows(rows);
        if (m.rank() == static_cast<int>(idx.size())) return true;  // independent: fine
        RatVec sol;
        return !m.solve(rhs, &sol);  // dependent: must be inconsistent
      }
      for (int j = start; j < fam.n; ++j) {
        idx.push_back(j);
        if (!rec(j + 1, want - 1)) { idx.pop_back(); return false; }
        idx.pop_back();
      }
      return true;
    };
    for (int size = 2; size <= fam.k + 1; ++size)
      if (!rec(0, size)) return false;
    return true;
  };

  auto fam = four_line_family();
  auto circuits = enumerate_circuits(fam);
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    RatVec z;
    for (int j = 0; j < fam.n; ++j) z.push_back(rng.rat(3, 2));
    bool via_circuits = classify_fiber(fam, circuits, FiberPoint::from_exact(z)).good;
    CHECK(via_circuits == direct_good(fam, z));
  }
}

TEST_CASE("independent subsets") {
  auto tri = triangle_family();
  auto p2 = independent_subsets(tri, 2);
  REQUIRE(p2.size() == 3);
  CHECK(p2[0] == std::vector<int>{0, 1});
  CHECK(p2[1] == std::vector<int>{0, 2});
  CHECK(p2[2] == std::vector<int>{1, 2});
  auto pairs = independent_subsets(pair_family(), 1);
  CHECK(pairs.size() == 2);
  CHECK_THROWS_AS(independent_subsets(tri, 3), std::out_of_range);
}

TEST_CASE("euler characteristic via the intersection poset") {
  auto tri = triangle_family();
  CHECK(euler_characteristic(tri, FiberPoint::from_exact({Rat(0), Rat(0), Rat(1)})) == 1);
  CHECK(euler_characteristic(pair_family(), FiberPoint::from_exact({Rat(0), Rat(-1)})) == -1);
  auto fl = four_line_family();
  CHECK(euler_characteristic(fl, FiberPoint::from_exact({Rat(0), Rat(0), Rat(0), Rat(-1)})) == 2);
  // doubled point: one point removed from the line
  CHECK(euler_characteristic(pair_family(), FiberPoint::from_exact({Rat(2), Rat(2)})) == 0);
}

TEST_CASE("good fibers: euler characteristic equals the alternating count") {
  Rng rng(11);
  auto fl = four_line_family();
  auto circuits = enumerate_circuits(fl);
  int tested = 0;
  while (tested < 8) {
    RatVec z;
    for (int j = 0; j < fl.n; ++j) z.push_back(rng.rat(4, 3));
    auto fp = FiberPoint::from_exact(z);
    if (!classify_fiber(fl, circuits, fp).good) continue;
    ++tested;
    CHECK(euler_characteristic(fl, fp) == independent_alternating_sum(fl));
  }
  CHECK(independent_alternating_sum(fl) == 1 - 4 + 6);
}

TEST_CASE("family validation catches broken invariants") {
  ArrangementFamily f;
  f.k = 2;
  f.n = 3;
  f.b = RatMat{{Rat(1), Rat(0)}, {Rat(2), Rat(0)}, {Rat(3), Rat(0)}};  // rank 1
  f.a = {Rat(1), Rat(1), Rat(1)};
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  auto g = triangle_family();
  g.a[1] = Rat(0);
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
