#pragma once

#include <complex>
#include <string>
#include <vector>

#include "arrham/hamiltonians.hpp"
#include "arrham/mastercrit.hpp"
#include "arrham/polyroots.hpp"

namespace arrham {

// Lie-algebra data defining a family of prediscriminantal arrangements:
// pairings of simple roots and highest weights plus marked points.
struct GaudinData {
  int r = 0;                 // rank
  int N = 0;                 // number of marked points
  RatMat alpha_gram;         // r x r, (alpha_i, alpha_j), diagonal nonzero
  RatMat lambda_pairings;    // N x r, (Lambda_b, alpha_i)
  RatMat lambda_gram;        // N x N, (Lambda_b, Lambda_c); only eigenvalue shifts use it
  std::vector<int> kvec;     // k_1..k_r, nonnegative, sum > 0
  RatVec x;                  // N distinct marked points

  void validate() const;
  int total_k() const;
};

enum class JKind { pair_same, pair_diff, point };  // J1, J2, J3

struct DiscIndex {
  JKind kind;
  int i = 0, i2 = 0;  // colors (i2 used by J2)
  int l = 0, l2 = 0;  // variable slots within color
  int b = 0;          // marked point (J3)
  std::string label() const;
};

// The weighted arrangement of the t-variables encoding a Gaudin master
// function, together with the special fiber z0 induced by x.
struct DiscriminantalArrangement {
  GaudinData data;
  ArrangementFamily fam;
  std::vector<DiscIndex> index;   // J = J1 u J2 u J3, in that order
  RatVec z0;

  int var(int color, int slot) const;    // coordinate index of t^{(i)}_l
  std::vector<int> block_of_point(int b) const;  // J3 indices of marked point b
  // Direction d/dx_b as a constant vector field on the z-space.
  RatVec dx_direction(int b) const;
};

DiscriminantalArrangement build_discriminantal(const GaudinData& data);

// Gradient of the Gaudin-form master function, computed directly from the
// pairing data (independent of the arrangement machinery; used as the
// dual route in tests).
RatVec gaudin_master_grad(const GaudinData& data, const RatVec& t);

// --- symmetries -----------------------------------------------------------

// Element of S_{k_1} x ... x S_{k_r}: perm[i][l] is the image of slot l.
struct SkElement {
  std::vector<std::vector<int>> perm;
  int parity() const;  // product of the per-color signs
};

std::vector<SkElement> sk_elements(const std::vector<int>& kvec);

struct SkAction {
  std::vector<int> j_map;    // image of each arrangement index
  std::vector<int> j_sign;   // -1 exactly when a J1 pair flips orientation
  int parity = 1;
  RatMat on_v;               // signed permutation on the standard basis of V
};

SkAction sk_action(const DiscriminantalArrangement& arr, const HamiltonianFamily& hf,
                   const SkElement& sigma);

// Ant = sum_sigma sgn(sigma) P_sigma on V.
RatMat antisymmetrizer(const DiscriminantalArrangement& arr, const HamiltonianFamily& hf);
long sk_order(const std::vector<int>& kvec);

// --- tensor modules -------------------------------------------------------

// Explicit tensor products of sl2 (spin) or gl2 (one-row partition)
// highest-weight modules with exact rational matrix actions.
struct TensorModule {
  bool gl2 = false;
  int N = 0;
  std::vector<long> hw;      // sl2: <Lambda_b, H>; gl2: lambda_{b,1}
  std::vector<long> dims;    // hw_b + 1
  long dim = 0;
  std::vector<long> strides;
  RatVec shapovalov;         // diagonal Gram of the tensor Shapovalov form

  static TensorModule sl2(std::vector<long> m);
  static TensorModule gl2_rows(std::vector<long> lam);

  long state_index(const std::vector<long>& s) const;
  std::vector<long> state_of(long idx) const;

  // Global matrices of single-factor generators. For sl2: "E","F","H".
  // For gl2: "e11","e12","e21","e22".
  RatMat factor_op(int b, const std::string& which) const;
  RatMat global_op(const std::string& which) const;  // sum over factors
  RatMat omega_pair(int b, int c) const;             // Casimir two-site term

  // States with total lowering degree kTotal (weight mu = sum Lambda - k alpha).
  std::vector<long> weight_states(long k_total) const;
  // Basis of singular vectors of that weight, in full module coordinates.
  std::vector<RatVec> sing_weight_basis(long k_total) const;
};

// K_b = sum_{c != b} Omega^{(b,c)} / (x_b - x_c); throws on coincident x.
std::vector<RatMat> gaudin_hamiltonians(const TensorModule& mod, const RatVec& x);

// The scalar by which the geometric and Gaudin Hamiltonians differ:
// c_b = sum_{c != b} (Lambda_b, Lambda_c) / (x_b - x_c).
Rat gaudin_scalar_shift(const GaudinData& data, int b);

// Expected eigenvalue of K_b on the Bethe vector of a critical point t.
template <class S>
S bethe_eigenvalue(const GaudinData& data, int b, const std::vector<S>& t);

// --- weight function and Bethe vectors (rank-1 modules) --------------------

// Weight function omega(x, t, k) of a rank-1 module, in full module
// coordinates.  S is Rat or Cplx.
template <class S>
std::vector<S> weight_function(const TensorModule& mod, const std::vector<S>& x,
                               const std::vector<S>& t);

struct BetheCheck {
  std::vector<Cplx> coords;       // the Bethe vector in module coordinates
  std::vector<Cplx> t;            // source critical point
  bool in_sing_weight_space = true;
  bool eigenvector = true;        // K_b omega = lambda_b omega for all b
  bool norm_identity = true;      // S(omega,omega) = det Hess_t Phi
  bool nonzero = true;
  double worst_rel = 0;
  std::vector<Cplx> eigenvalues;  // lambda_b per marked point
};

// Numeric verification of the Bethe theorems at a critical point t of the
// discriminantal master function (skipped checks report true).
BetheCheck check_bethe_vector(const TensorModule& mod, const GaudinData& data,
                              const DiscriminantalArrangement& arr,
                              const std::vector<Cplx>& t, double tol = 1e-8);

// Bethe roots of a one-variable master function: exact when the critical
// equation is linear, numeric otherwise.
RatPoly k1_bethe_numerator(const ArrangementFamily& fam, const RatVec& z);
std::vector<Cplx> k1_bethe_roots(const ArrangementFamily& fam, const RatVec& z);

// --- spectra comparison -----------------------------------------------------

struct SpectraReport {
  bool dims_match = false;
  int geometric_dim = 0;
  int gaudin_dim = 0;
  bool charpoly_equal = false;   // exact, all b, after the c_b shift
  bool multiset_within_tol = false;
  double worst = 0;
  std::vector<std::vector<Cplx>> geometric_spectra;  // per b
  std::vector<std::vector<Cplx>> gaudin_spectra;     // per b, shifted by -c_b
};

// Compares eigenvalues of the geometric operators K_{d/dx_b} on Sing V of
// the special fiber with the Gaudin Hamiltonians on Sing V_Lambda[mu]
// shifted by c_b.  Requires the special fiber to be good (k = 1 data).
SpectraReport geometric_vs_gaudin_spectra(const DiscriminantalArrangement& arr,
                                          const TensorModule& mod, double tol = 1e-8);

// --- gl2 row-determinant Bethe operators -----------------------------------

// e_{ij}(u) = sum_b e_{ij}^{(b)} / (u - x_b); throws when u hits a pole.
RatMat gl2_e_of_u(const TensorModule& mod, int i, int j, const RatVec& x, const Rat& u);
// B1(u) = -(e11 + e22)(u);  B2(u) = e11(u) e22(u) - e22'(u) - e21(u) e12(u).
RatMat gl2_b1(const TensorModule& mod, const RatVec& x, const Rat& u);
RatMat gl2_b2(const TensorModule& mod, const RatVec& x, const Rat& u);

// Scalar coefficients of the critical-point differential operator:
// G1 = -log' T1,  G2 = log'(T1/Q1) log' Q1 - (log' Q1)'.
template <class S>
S dphi_g1(const GaudinData& data, const S& u);
template <class S>
S dphi_g2(const GaudinData& data, const S& u, const std::vector<S>& t);

}  // namespace arrham
