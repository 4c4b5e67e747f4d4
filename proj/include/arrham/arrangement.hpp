#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arrham/ratmat.hpp"

namespace arrham {

// A family of parallelly translated hyperplanes f_j = z_j + b_j.t in the
// fiber space of dimension k.  Row j of `b` holds the linear part of the
// j-th hyperplane; `a` holds the (nonzero) weights.
struct ArrangementFamily {
  int k = 0;
  int n = 0;
  RatMat b;       // n x k
  RatVec a;       // n weights
  std::vector<std::string> labels;

  void validate() const;  // throws std::invalid_argument on broken invariants
  RatVec linear_part(int j) const { return b.row(j); }
  // f_j(z, t) over exact scalars.
  Rat f(int j, const RatVec& z, const RatVec& t) const;
  double f_d(int j, const std::vector<double>& z, const std::vector<double>& t) const;
  // Sufficient/necessary pieces of the unbalanced condition: positive
  // weights suffice; total weight zero rules it out.  Dense-edge
  // enumeration is not implemented, so the mixed-sign case is unknown.
  enum class Unbalanced { yes, no, unknown };
  Unbalanced unbalanced_check() const;
  bool all_weights_positive() const;
};

// Translation parameters of one fiber.  Exact coordinates are required by
// every combinatorial predicate; inexact fibers only reach the numeric
// critical-point path.
struct FiberPoint {
  RatVec z;                 // empty when not exact
  std::vector<double> zd;   // always populated
  bool exact = false;

  static FiberPoint from_exact(RatVec z);
  static FiberPoint from_doubles(std::vector<double> z);
  const RatVec& require_exact(const char* who) const;
};

// Minimal dependent subset of rows together with its syzygy, normalized so
// the coefficient at the smallest index equals +1.
struct Circuit {
  std::vector<int> support;  // sorted, 0-based
  RatVec syzygy;             // aligned with support

  Rat f_C(const RatVec& z) const;
  double f_C_d(const std::vector<double>& z) const;
};

std::vector<Circuit> enumerate_circuits(const ArrangementFamily& fam);

struct FiberClassification {
  bool good = true;
  std::vector<Circuit> vanishing_circuits;
};

// Exact predicate: the fiber is good iff no circuit covector vanishes at z.
FiberClassification classify_fiber(const ArrangementFamily& fam,
                                   const std::vector<Circuit>& circuits,
                                   const FiberPoint& z);

// All p-subsets of row indices with independent linear parts, in
// lexicographic order.  Throws std::out_of_range unless 0 <= p <= k.
std::vector<std::vector<int>> independent_subsets(const ArrangementFamily& fam, int p);

struct PosetFlat {
  std::vector<int> hyperplanes;  // all j whose hyperplane contains the flat
  int dim = 0;                   // affine dimension of the flat
  long mobius = 0;
};

struct IntersectionPoset {
  std::vector<PosetFlat> flats;  // proper flats, ambient space excluded
  long euler = 0;                // 1 + sum of flat Mobius values
};

IntersectionPoset intersection_poset(const ArrangementFamily& fam, const RatVec& z);

// Euler characteristic of the complement of the fiber arrangement,
// computed from the Mobius function of the intersection poset.
long euler_characteristic(const ArrangementFamily& fam, const FiberPoint& z);

// Alternating count sum_p (-1)^p #(independent p-subsets); equals the
// Euler characteristic on good fibers (used as the cross-check oracle).
long independent_alternating_sum(const ArrangementFamily& fam);

}  // namespace arrham
