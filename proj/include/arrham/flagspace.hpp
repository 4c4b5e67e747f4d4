#pragma once

#include <map>
#include <vector>

#include "arrham/arrangement.hpp"

namespace arrham {

// Standard basis of OS^p / F^p on good-fiber combinatorics: independent
// p-subsets in lexicographic order.  All coordinate vectors in this
// library are aligned with such a basis.
struct StandardBasis {
  int p = 0;
  std::vector<std::vector<int>> subsets;
  std::map<std::vector<int>, int> index;

  static StandardBasis build(const ArrangementFamily& fam, int p);
  int find(const std::vector<int>& sorted_subset) const;  // -1 if absent
  int size() const { return static_cast<int>(subsets.size()); }
};

// Sign of the permutation sorting `tuple` ascending; 0 if entries repeat.
// `tuple` is sorted in place.
int sort_sign(std::vector<int>& tuple);

// Adds coeff * F(H_{tuple...}) to the coordinate vector, applying the skew
// reindexing sign.  Tuples that are dependent or repeat indices add zero.
void add_flag_tuple(const StandardBasis& basis, std::vector<int> tuple, const Rat& coeff,
                    RatVec* coords);

// Matrix of d^(a): OS^p -> OS^{p+1} in standard bases (rows: independent
// (p+1)-subsets, cols: independent p-subsets).  The dual delta^(a) acting
// on F^{p+1} coordinates is the transpose.
RatMat weighted_differential(const ArrangementFamily& fam, int p);
// Top-degree convenience: p = k-1.
RatMat weighted_differential(const ArrangementFamily& fam);

struct SingBasis {
  enum class Ambient { good_fiber, degenerate };
  Ambient ambient = Ambient::good_fiber;
  std::vector<RatVec> vectors;  // coordinates in the top-degree standard basis

  int dim() const { return static_cast<int>(vectors.size()); }
};

// Exact basis of Sing V = ker(delta^(a)) on the top-degree flag space.
SingBasis sing_basis(const ArrangementFamily& fam);

// Diagonal of the contravariant form in the standard basis: prod a_j over
// each independent subset.
RatVec gram_diagonal(const ArrangementFamily& fam, const StandardBasis& basis);

Rat contravariant_pair(const RatVec& gram, const RatVec& u, const RatVec& v);

// Leading-principal-minor test of positive definiteness of the form
// restricted to span(basis).
bool restricted_form_positive_definite(const RatVec& gram, const std::vector<RatVec>& basis);

struct DegenerateSubspaces {
  std::vector<std::vector<int>> relation_supports;  // consistent (k+1)-subsets
  std::vector<RatVec> relations;       // each expanded in the OS^k standard basis
  std::vector<RatVec> f_basis;         // basis of F^k(A(z0)) inside V
  SingBasis sing;                      // basis of Sing F^k(A(z0))
};

// The top-degree subspace of a bad fiber, embedded in V: annihilator of
// the relations coming from newly consistent (k+1)-subsets, intersected
// with ker(delta^(a)) for the singular part.
DegenerateSubspaces degenerate_subspaces(const ArrangementFamily& fam,
                                         const std::vector<Circuit>& circuits,
                                         const FiberPoint& z0);

}  // namespace arrham
