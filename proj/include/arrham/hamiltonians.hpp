#pragma once

#include <string>
#include <vector>

#include "arrham/flagspace.hpp"

namespace arrham {

// Matrix of the circuit operator L_C on the top-degree standard basis.
RatMat circuit_operator(const ArrangementFamily& fam, const StandardBasis& top,
                        const Circuit& c);

// Holds everything needed to evaluate geometric Hamiltonians at any fiber:
// the circuits with their operators, the standard basis and the diagonal
// of the contravariant form.  Values are immutable after construction.
struct HamiltonianFamily {
  ArrangementFamily fam;
  std::vector<Circuit> circuits;
  StandardBasis top;
  RatVec gram;
  std::vector<RatMat> lc;    // aligned with circuits
  std::string kappa_label;   // recorded for report labeling only

  static HamiltonianFamily build(const ArrangementFamily& fam, std::string kappa = "kappa");

  // Indices into `circuits` of the covectors vanishing at z0.
  std::vector<int> vanishing_set(const RatVec& z0) const;

  // K_j(z) = sum_C lambda^C_j / f_C(z) * L_C; requires a good fiber.
  RatMat k_at(const RatVec& z, int j) const;
  // Regular part at a bad fiber: the sum restricted to non-vanishing circuits.
  RatMat k1_at(const RatVec& z0, int j) const;
  // d K_j / d z_i evaluated at z (exact): -sum_C lambda_j lambda_i / f_C^2 L_C.
  RatMat dk_at(const RatVec& z, int j, int i) const;
};

struct FlatnessReport {
  bool curvature_zero = false;    // dK_j/dz_i - dK_i/dz_j = 0 on V
  bool commute_on_sing = false;   // [K_i, K_j] v = 0 for all singular v
  std::string failure;            // offending entry when a check fails
};

FlatnessReport verify_flatness(const HamiltonianFamily& hf, const RatVec& z, int i, int j,
                               const std::vector<RatVec>& sing);

// Basis of the space of constant vector fields tangent to the discriminant
// stratum through z0 (nullspace of the vanishing-circuit covectors).
std::vector<RatVec> tangent_directions(const HamiltonianFamily& hf, const RatVec& z0);

// K_xi(z0) = sum_j xi_j K_j^1(z0) for a tangent direction xi; checks the
// tangency condition and that the operator preserves F^k(A(z0)).
RatMat naive_hamiltonian(const HamiltonianFamily& hf, const RatVec& xi, const RatVec& z0,
                         const std::vector<RatVec>& f_basis);

// Operators pr K_j^1(z0) restricted to Sing F^k(A(z0)), one per j, in the
// coordinates of sing0.  pr is the orthogonal projection with respect to
// the contravariant form; throws std::domain_error when the restricted
// form is degenerate.
std::vector<RatMat> regularized_hamiltonians(const HamiltonianFamily& hf, const RatVec& z0,
                                             const std::vector<RatVec>& sing0);

}  // namespace arrham
