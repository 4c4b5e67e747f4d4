#include "arrham/hamiltonians.hpp"

#include <algorithm>
#include <stdexcept>

namespace arrham {

RatMat circuit_operator(const ArrangementFamily& fam, const StandardBasis& top,
                        const Circuit& c) {
  const int r = static_cast<int>(c.support.size());
  RatMat op(top.size(), top.size());
  for (int col = 0; col < top.size(); ++col) {
    const auto& sub = top.subsets[col];
    std::vector<int> inter;
    std::set_intersection(sub.begin(), sub.end(), c.support.begin(), c.support.end(),
                          std::back_inserter(inter));
    if (static_cast<int>(inter.size()) < r - 1) continue;
    // inter == C \ {i_m}: find m (1-based position inside the circuit).
    int m = -1;
    for (int q = 0; q < r; ++q)
      if (!std::binary_search(inter.begin(), inter.end(), c.support[q])) { m = q + 1; break; }
    if (m < 0) continue;  // sub contains all of C: impossible for independent sub
    std::vector<int> rest;  // sub \ C, keeps order
    std::set_difference(sub.begin(), sub.end(), inter.begin(), inter.end(),
                        std::back_inserter(rest));
    // Reorder F(H_sub) as +-F(H_{C\{i_m}}, H_rest): the sign is that of the
    // permutation sorting the concatenated tuple.
    std::vector<int> arranged;
    for (int q = 0; q < r; ++q)
      if (q + 1 != m) arranged.push_back(c.support[q]);
    arranged.insert(arranged.end(), rest.begin(), rest.end());
    int base_sign = sort_sign(arranged);
    if (base_sign == 0) continue;
    Rat lead = (m % 2 == 0) ? Rat(1) : Rat(-1);  // (-1)^m
    lead *= base_sign;
    for (int l = 1; l <= r; ++l) {
      std::vector<int> target;
      for (int q = 0; q < r; ++q)
        if (q + 1 != l) target.push_back(c.support[q]);
      target.insert(target.end(), rest.begin(), rest.end());
      int tsign = sort_sign(target);
      if (tsign == 0) continue;
      int row = top.find(target);
      if (row < 0) continue;
      Rat coeff = lead * fam.a[c.support[l - 1]] * tsign;
      op.at(row, col) += (l % 2 == 0) ? coeff : -coeff;  // (-1)^l
    }
  }
  return op;
}

HamiltonianFamily HamiltonianFamily::build(const ArrangementFamily& fam, std::string kappa) {
  HamiltonianFamily hf;
  hf.fam = fam;
  hf.fam.validate();
  hf.circuits = enumerate_circuits(fam);
  hf.top = StandardBasis::build(fam, fam.k);
  hf.gram = gram_diagonal(fam, hf.top);
  hf.lc.reserve(hf.circuits.size());
  for (const auto& c : hf.circuits) hf.lc.push_back(circuit_operator(fam, hf.top, c));
  hf.kappa_label = std::move(kappa);
  return hf;
}

std::vector<int> HamiltonianFamily::vanishing_set(const RatVec& z0) const {
  std::vector<int> out;
  for (size_t ci = 0; ci < circuits.size(); ++ci)
    if (is_zero(circuits[ci].f_C(z0))) out.push_back(static_cast<int>(ci));
  return out;
}

namespace {

Rat syzygy_coeff(const Circuit& c, int j) {
  auto it = std::lower_bound(c.support.begin(), c.support.end(), j);
  if (it == c.support.end() || *it != j) return Rat(0);
  return c.syzygy[static_cast<size_t>(it - c.support.begin())];
}

}  // namespace

RatMat HamiltonianFamily::k_at(const RatVec& z, int j) const {
  RatMat m(top.size(), top.size());
  for (size_t ci = 0; ci < circuits.size(); ++ci) {
    Rat fc = circuits[ci].f_C(z);
    if (is_zero(fc))
      throw std::domain_error(
          "hamiltonian_at: bad fiber (a circuit covector vanishes); use split_at/k1_at");
    Rat lam = syzygy_coeff(circuits[ci], j);
    if (is_zero(lam)) continue;
    m = m + lc[ci].scaled(lam / fc);
  }
  return m;
}

RatMat HamiltonianFamily::k1_at(const RatVec& z0, int j) const {
  RatMat m(top.size(), top.size());
  for (size_t ci = 0; ci < circuits.size(); ++ci) {
    Rat fc = circuits[ci].f_C(z0);
    if (is_zero(fc)) continue;
    Rat lam = syzygy_coeff(circuits[ci], j);
    if (is_zero(lam)) continue;
    m = m + lc[ci].scaled(lam / fc);
  }
  return m;
}

RatMat HamiltonianFamily::dk_at(const RatVec& z, int j, int i) const {
  RatMat m(top.size(), top.size());
  for (size_t ci = 0; ci < circuits.size(); ++ci) {
    Rat lam_j = syzygy_coeff(circuits[ci], j);
    Rat lam_i = syzygy_coeff(circuits[ci], i);
    if (is_zero(lam_j) || is_zero(lam_i)) continue;
    Rat fc = circuits[ci].f_C(z);
    if (is_zero(fc)) throw std::domain_error("dk_at: bad fiber");
    m = m - lc[ci].scaled(lam_j * lam_i / (fc * fc));
  }
  return m;
}

FlatnessReport verify_flatness(const HamiltonianFamily& hf, const RatVec& z, int i, int j,
                               const std::vector<RatVec>& sing) {
  FlatnessReport rep;
  RatMat curv = hf.dk_at(z, j, i) - hf.dk_at(z, i, j);
  rep.curvature_zero = curv.is_zero();
  if (!rep.curvature_zero) {
    for (int r = 0; r < curv.rows() && rep.failure.empty(); ++r)
      for (int c = 0; c < curv.cols(); ++c)
        if (!is_zero(curv.at(r, c))) {
          rep.failure = "curvature entry (" + std::to_string(r) + "," + std::to_string(c) +
                        ") = " + rat_str(curv.at(r, c));
          break;
        }
  }
  RatMat ki = hf.k_at(z, i), kj = hf.k_at(z, j);
  rep.commute_on_sing = true;
  for (const auto& v : sing) {
    RatVec w = ki * (kj * v);
    RatVec w2 = kj * (ki * v);
    for (size_t q = 0; q < w.size(); ++q)
      if (w[q] != w2[q]) {
        rep.commute_on_sing = false;
        if (rep.failure.empty())
          rep.failure = "commutator component " + std::to_string(q) + " = " +
                        rat_str(Rat(w[q] - w2[q]));
      }
  }
  return rep;
}

std::vector<RatVec> tangent_directions(const HamiltonianFamily& hf, const RatVec& z0) {
  std::vector<int> vanish = hf.vanishing_set(z0);
  if (vanish.empty())
    throw std::invalid_argument("tangent_directions: fiber is good (no discriminant stratum)");
  std::vector<RatVec> rows;
  for (int ci : vanish) {
    RatVec lam(hf.fam.n);
    const auto& c = hf.circuits[ci];
    for (size_t q = 0; q < c.support.size(); ++q) lam[c.support[q]] = c.syzygy[q];
    rows.push_back(std::move(lam));
  }
  return RatMat::from_rows(rows).kernel();
}

RatMat naive_hamiltonian(const HamiltonianFamily& hf, const RatVec& xi, const RatVec& z0,
                         const std::vector<RatVec>& f_basis) {
  std::vector<int> vanish = hf.vanishing_set(z0);
  for (int ci : vanish) {
    Rat pairing = 0;
    const auto& c = hf.circuits[ci];
    for (size_t q = 0; q < c.support.size(); ++q) pairing += c.syzygy[q] * xi[c.support[q]];
    if (!is_zero(pairing))
      throw std::invalid_argument("naive_hamiltonian: xi is not tangent to the stratum");
  }
  RatMat m(hf.top.size(), hf.top.size());
  for (int j = 0; j < hf.fam.n; ++j) {
    if (is_zero(xi[j])) continue;
    m = m + hf.k1_at(z0, j).scaled(xi[j]);
  }
  // Lemma: K_xi(z0) preserves F^k(A(z0)).
  RatSpan span;
  for (const auto& v : f_basis) span.insert(v);
  for (const auto& v : f_basis)
    if (!span.contains(m * v))
      throw std::logic_error("naive_hamiltonian: operator does not preserve F^k(A(z0))");
  return m;
}

std::vector<RatMat> regularized_hamiltonians(const HamiltonianFamily& hf, const RatVec& z0,
                                             const std::vector<RatVec>& sing0) {
  if (hf.vanishing_set(z0).empty())
    throw std::invalid_argument("regularized_hamiltonians: fiber is good");
  if (sing0.empty()) return std::vector<RatMat>(hf.fam.n, RatMat(0, 0));
  int d = static_cast<int>(sing0.size());
  RatMat bmat = RatMat::from_columns(sing0);
  // Gram matrix of the restricted contravariant form.
  RatMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g.at(i, j) = contravariant_pair(hf.gram, sing0[i], sing0[j]);
  RatMat ginv;
  try {
    ginv = g.inverse();
  } catch (const std::domain_error&) {
    throw std::domain_error(
        "regularized_hamiltonians: contravariant form degenerate on Sing F^k(A(z0))");
  }
  // Coordinates of pr K_j^1(z0) b_s: X_j = G^{-1} B^T S K_j^1 B.
  RatMat st_b(bmat.cols(), bmat.rows());  // B^T S, with S diagonal
  for (int i = 0; i < bmat.cols(); ++i)
    for (int r = 0; r < bmat.rows(); ++r) st_b.at(i, r) = bmat.at(r, i) * hf.gram[r];
  std::vector<RatMat> out;
  out.reserve(hf.fam.n);
  for (int j = 0; j < hf.fam.n; ++j)
    out.push_back(ginv * (st_b * (hf.k1_at(z0, j) * bmat)));
  return out;
}

}  // namespace arrham
