#include "arrham/flagspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace arrham {

StandardBasis StandardBasis::build(const ArrangementFamily& fam, int p) {
  StandardBasis basis;
  basis.p = p;
  basis.subsets = independent_subsets(fam, p);
  for (size_t i = 0; i < basis.subsets.size(); ++i)
    basis.index.emplace(basis.subsets[i], static_cast<int>(i));
  return basis;
}

int StandardBasis::find(const std::vector<int>& sorted_subset) const {
  auto it = index.find(sorted_subset);
  return it == index.end() ? -1 : it->second;
}

int sort_sign(std::vector<int>& tuple) {
  int sign = 1;
  for (size_t i = 1; i < tuple.size(); ++i)
    for (size_t j = i; j > 0 && tuple[j - 1] >= tuple[j]; --j) {
      if (tuple[j - 1] == tuple[j]) return 0;
      std::swap(tuple[j - 1], tuple[j]);
      sign = -sign;
    }
  return sign;
}

void add_flag_tuple(const StandardBasis& basis, std::vector<int> tuple, const Rat& coeff,
                    RatVec* coords) {
  int sign = sort_sign(tuple);
  if (sign == 0) return;
  int idx = basis.find(tuple);
  if (idx < 0) return;  // dependent tuple: zero in the standard basis
  (*coords)[idx] += sign > 0 ? coeff : -coeff;
}

RatMat weighted_differential(const ArrangementFamily& fam, int p) {
  if (p < 0 || p >= fam.k) throw std::out_of_range("weighted_differential: need 0 <= p < k");
  StandardBasis from = StandardBasis::build(fam, p);
  StandardBasis to = StandardBasis::build(fam, p + 1);
  RatMat d(to.size(), from.size());
  for (int c = 0; c < from.size(); ++c) {
    const auto& sub = from.subsets[c];
    // nu(a) * (H_sub) = sum_j a_j (H_j, H_sub), reindexed into the basis.
    RatVec col(to.size());
    for (int j = 0; j < fam.n; ++j) {
      std::vector<int> tuple;
      tuple.push_back(j);
      tuple.insert(tuple.end(), sub.begin(), sub.end());
      add_flag_tuple(to, std::move(tuple), fam.a[j], &col);
    }
    for (int r = 0; r < to.size(); ++r) d.at(r, c) = col[r];
  }
  return d;
}

RatMat weighted_differential(const ArrangementFamily& fam) {
  return weighted_differential(fam, fam.k - 1);
}

SingBasis sing_basis(const ArrangementFamily& fam) {
  RatMat delta = weighted_differential(fam).transpose();
  SingBasis sb;
  sb.ambient = SingBasis::Ambient::good_fiber;
  sb.vectors = delta.kernel();
  return sb;
}

RatVec gram_diagonal(const ArrangementFamily& fam, const StandardBasis& basis) {
  RatVec g(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    Rat prod = 1;
    for (int j : basis.subsets[i]) prod *= fam.a[j];
    g[i] = prod;
  }
  return g;
}

Rat contravariant_pair(const RatVec& gram, const RatVec& u, const RatVec& v) {
  if (gram.size() != u.size() || u.size() != v.size())
    throw std::invalid_argument("contravariant_pair: dimension mismatch");
  Rat s = 0;
  for (size_t i = 0; i < gram.size(); ++i)
    if (!is_zero(u[i]) && !is_zero(v[i])) s += gram[i] * u[i] * v[i];
  return s;
}

bool restricted_form_positive_definite(const RatVec& gram, const std::vector<RatVec>& basis) {
  int d = static_cast<int>(basis.size());
  RatMat g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g.at(i, j) = contravariant_pair(gram, basis[i], basis[j]);
  for (int m = 1; m <= d; ++m) {
    RatMat lead(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) lead.at(i, j) = g.at(i, j);
    if (sgn(lead.det()) <= 0) return false;
  }
  return true;
}

namespace {

// Is the affine system { f_j(z0, t) = 0 : j in sub } consistent?
bool consistent_subset(const ArrangementFamily& fam, const RatVec& z0,
                       const std::vector<int>& sub) {
  std::vector<RatVec> rows;
  RatVec rhs;
  for (int j : sub) {
    rows.push_back(fam.b.row(j));
    rhs.push_back(-z0[j]);
  }
  return RatMat::from_rows(rows).solve(rhs, nullptr);
}

}  // namespace

DegenerateSubspaces degenerate_subspaces(const ArrangementFamily& fam,
                                         const std::vector<Circuit>& circuits,
                                         const FiberPoint& z0) {
  const RatVec& z = z0.require_exact("degenerate_subspaces");
  FiberClassification cls = classify_fiber(fam, circuits, z0);
  if (cls.good)
    throw std::invalid_argument("degenerate_subspaces: fiber is good, use sing_basis");

  StandardBasis top = StandardBasis::build(fam, fam.k);
  DegenerateSubspaces out;

  // Relations sum_i (-1)^i (H_{j_1},...,^H_{j_i},...,H_{j_{k+1}}) for every
  // (k+1)-subset whose affine system is consistent at z0.  Tuples stay
  // ascending after a deletion, so no reordering signs appear here.
  std::vector<int> idx(fam.k + 1);
  for (int i = 0; i <= fam.k; ++i) idx[i] = i;
  for (;;) {
    if (consistent_subset(fam, z, idx)) {
      RatVec rel(top.size());
      for (int i = 0; i <= fam.k; ++i) {
        std::vector<int> sub;
        for (int q = 0; q <= fam.k; ++q)
          if (q != i) sub.push_back(idx[q]);
        int pos = top.find(sub);
        if (pos >= 0) rel[pos] += (i % 2 == 0) ? Rat(-1) : Rat(1);  // (-1)^i, i is 1-based
      }
      if (!is_zero_vec(rel)) {
        out.relation_supports.push_back(idx);
        out.relations.push_back(std::move(rel));
      }
    }
    int i = fam.k;
    while (i >= 0 && idx[i] == fam.n - (fam.k + 1) + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int q = i + 1; q <= fam.k; ++q) idx[q] = idx[q - 1] + 1;
  }

  if (out.relations.empty())
    throw std::logic_error("degenerate_subspaces: bad fiber produced no relations");

  out.f_basis = RatMat::from_rows(out.relations).kernel();

  // Sing F^k(A(z0)) = F^k(A(z0))  intersect  ker(delta): stack the relation
  // rows with delta and take the kernel.
  RatMat delta = weighted_differential(fam).transpose();
  std::vector<RatVec> stacked = out.relations;
  for (int i = 0; i < delta.rows(); ++i) stacked.push_back(delta.row(i));
  out.sing.ambient = SingBasis::Ambient::degenerate;
  out.sing.vectors = RatMat::from_rows(stacked).kernel();
  return out;
}

}  // namespace arrham
