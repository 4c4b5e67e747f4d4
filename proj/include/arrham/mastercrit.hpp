#pragma once

#include <complex>
#include <vector>

#include "arrham/flagspace.hpp"

namespace arrham {

// Value/gradient/Hessian of Phi = sum a_j log f_j.  The value is the real
// branch sum a_j log|f_j|, well defined inside a region of a real fiber.
struct MasterEval {
  double value = 0;
  std::vector<double> grad;
  std::vector<std::vector<double>> hess;
};

MasterEval master_eval(const ArrangementFamily& fam, const std::vector<double>& z,
                       const std::vector<double>& t);

// Exact gradient and Hessian determinant at a rational point of the complement.
RatVec master_grad_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t);
RatMat master_hess_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t);
Rat master_hess_det_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t);

struct RegionCell {
  std::vector<int> sign;  // +1 / -1 per hyperplane
  RatVec witness;         // interior point, exact
  bool bounded = false;
};

// Every bounded full-dimensional cell of the real fiber arrangement, with
// an exact interior witness; boundedness is certified by the recession
// cone being trivial.  Requires exact real z.
std::vector<RegionCell> enumerate_bounded_regions(const ArrangementFamily& fam, const RatVec& z);

struct CriticalPoint {
  std::vector<double> t;    // double projection of t_refined
  RatVec t_refined;         // rational refinement of the solution
  double residual = 0;      // exact gradient residual at t_refined, max |dPhi/dt_i|
  double hess_det = 0;
  int region = -1;
  bool nondegenerate = true;
};

// One critical point per bounded region: damped Newton in doubles from the
// region witness, then exact rational Newton until the residual meets the
// tolerance (double precision alone cannot always reach 1e-12 when the
// gradient scale is large).  Requires positive weights (Phi is strictly
// concave on each region).  Throws on Newton failure, naming the region.
std::vector<CriticalPoint> solve_critical_points(const ArrangementFamily& fam,
                                                 const FiberPoint& z, double tol = 1e-12,
                                                 int max_steps = 60);

// Special vector v(t): coordinate at an independent subset {j1<...<jk} is
// det(b_{j1},...,b_{jk}) / prod f_{j_i}(z,t).
RatVec special_vector_exact(const ArrangementFamily& fam, const StandardBasis& top,
                            const RatVec& z, const RatVec& t);
std::vector<double> special_vector_d(const ArrangementFamily& fam, const StandardBasis& top,
                                     const std::vector<double>& z, const std::vector<double>& t);
std::vector<std::complex<double>> special_vector_c(const ArrangementFamily& fam,
                                                   const StandardBasis& top,
                                                   const std::vector<double>& z,
                                                   const std::vector<std::complex<double>>& t);

// Residue functional of a nondegenerate critical point: f -> f(p)/Hess(p),
// the closed form of the local residue pairing when the Milnor number is 1.
struct ResiduePairing {
  std::vector<double> p;
  double hess_at_p = 0;

  double eval(double f_at_p) const { return f_at_p / hess_at_p; }
  // (1, Hess)_p = Hess(p)/Hess(p) = 1 by construction.
  double pair_one_one() const { return 1.0 / hess_at_p; }
};

struct NormOrthReport {
  bool norm_identity = true;   // S(v(t),v(t)) = (-1)^k Hess(t) at every point
  bool orthogonal = true;      // S(v(t_s), v(t_r)) = 0 for s != r
  double worst_norm_rel = 0;
  double worst_orth_rel = 0;
};

NormOrthReport verify_hessian_norm_and_orthogonality(const ArrangementFamily& fam,
                                                     const StandardBasis& top,
                                                     const std::vector<double>& z,
                                                     const std::vector<CriticalPoint>& pts,
                                                     double tol = 1e-8);

struct AlgebraReport {
  bool residue_identity = true;       // S(a_p(1),a_p(1)) = (-1)^k (1,1)_p per point
  bool eigenvalues_match = true;      // K_j v(p) = a_j/f_j(z,p) v(p)
  bool tuples_distinct = true;        // joint eigenvalue tuples separate the points
  bool regular_representation = true; // dim algebra<K_j|Sing> = #points = dim Sing V
  int algebra_dim = 0;
  int excluded_degenerate = 0;
  double worst_rel = 0;
};

// The algebra-of-functions correspondence at nondegenerate critical points.
AlgebraReport algebra_correspondence(const ArrangementFamily& fam,
                                     const std::vector<CriticalPoint>& pts, const RatVec& z,
                                     double tol = 1e-8);

}  // namespace arrham
