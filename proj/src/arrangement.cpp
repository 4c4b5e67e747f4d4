#include "arrham/arrangement.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace arrham {

void ArrangementFamily::validate() const {
  if (k <= 0) throw std::invalid_argument("k must be positive");
  if (n <= k) throw std::invalid_argument("need n > k hyperplanes");
  if (b.rows() != n || b.cols() != k) throw std::invalid_argument("linear part shape mismatch");
  if (static_cast<int>(a.size()) != n) throw std::invalid_argument("weight count mismatch");
  for (int j = 0; j < n; ++j) {
    if (is_zero(a[j])) throw std::invalid_argument("weight a_" + std::to_string(j + 1) + " is zero");
    if (is_zero_vec(b.row(j)))
      throw std::invalid_argument("linear part of hyperplane " + std::to_string(j + 1) + " is zero");
  }
  if (b.rank() != k) throw std::invalid_argument("family is not essential (rank < k)");
}

Rat ArrangementFamily::f(int j, const RatVec& z, const RatVec& t) const {
  Rat v = z[j];
  for (int i = 0; i < k; ++i) v += b.at(j, i) * t[i];
  return v;
}

double ArrangementFamily::f_d(int j, const std::vector<double>& z,
                              const std::vector<double>& t) const {
  double v = z[j];
  for (int i = 0; i < k; ++i) v += rat_d(b.at(j, i)) * t[i];
  return v;
}

bool ArrangementFamily::all_weights_positive() const {
  for (const auto& w : a)
    if (sgn(w) <= 0) return false;
  return true;
}

ArrangementFamily::Unbalanced ArrangementFamily::unbalanced_check() const {
  if (all_weights_positive()) return Unbalanced::yes;
  Rat total = 0;
  for (const auto& w : a) total += w;
  if (is_zero(total)) return Unbalanced::no;  // the hyperplane at infinity has weight 0
  return Unbalanced::unknown;
}

FiberPoint FiberPoint::from_exact(RatVec z) {
  FiberPoint p;
  p.exact = true;
  p.zd.reserve(z.size());
  for (const auto& x : z) p.zd.push_back(rat_d(x));
  p.z = std::move(z);
  return p;
}

FiberPoint FiberPoint::from_doubles(std::vector<double> z) {
  FiberPoint p;
  p.exact = false;
  p.zd = std::move(z);
  return p;
}

const RatVec& FiberPoint::require_exact(const char* who) const {
  if (!exact)
    throw std::invalid_argument(std::string(who) +
                                ": refusing inexact fiber coordinates (exact rationals required)");
  return z;
}

Rat Circuit::f_C(const RatVec& z) const {
  Rat v = 0;
  for (size_t i = 0; i < support.size(); ++i) v += syzygy[i] * z[support[i]];
  return v;
}

double Circuit::f_C_d(const std::vector<double>& z) const {
  double v = 0;
  for (size_t i = 0; i < support.size(); ++i) v += rat_d(syzygy[i]) * z[support[i]];
  return v;
}

namespace {

// Enumerates subsets of {0..n-1} of size p in lexicographic order, calling
// fn on each.
template <class F>
void for_each_subset(int n, int p, F&& fn) {
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  if (p > n) return;
  for (;;) {
    fn(idx);
    int i = p - 1;
    while (i >= 0 && idx[i] == n - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<std::vector<int>> independent_subsets(const ArrangementFamily& fam, int p) {
  if (p < 0 || p > fam.k)
    throw std::out_of_range("independent_subsets: p out of range [0, k]");
  std::vector<std::vector<int>> out;
  for_each_subset(fam.n, p, [&](const std::vector<int>& idx) {
    std::vector<RatVec> rows;
    rows.reserve(idx.size());
    for (int j : idx) rows.push_back(fam.b.row(j));
    if (p == 0 || RatMat::from_rows(rows).rank() == p) out.push_back(idx);
  });
  return out;
}

std::vector<Circuit> enumerate_circuits(const ArrangementFamily& fam) {
  fam.validate();
  std::map<std::vector<int>, RatVec> found;
  // For every independent subset B and every j not in B with b_j in
  // span(B), the support of the expansion of b_j over B, together with j,
  // is a circuit.  Minimality follows from the uniqueness of the expansion.
  for (int p = 1; p <= fam.k; ++p) {
    for (const auto& base : independent_subsets(fam, p)) {
      std::vector<RatVec> cols;
      for (int j : base) cols.push_back(fam.b.row(j));
      RatMat bt = RatMat::from_columns(cols);  // k x p
      for (int j = 0; j < fam.n; ++j) {
        if (std::binary_search(base.begin(), base.end(), j)) continue;
        RatVec coeff;
        if (!bt.solve(fam.b.row(j), &coeff)) continue;  // b_j not in span(B)
        {
          RatVec back = bt * coeff;
          RatVec target = fam.b.row(j);
          if (back != target) continue;
        }
        std::vector<int> support;
        RatVec lam_at;  // syzygy entries aligned with support, before normalization
        for (int i = 0; i < p; ++i)
          if (!is_zero(coeff[i])) {
            support.push_back(base[i]);
            lam_at.push_back(coeff[i]);
          }
        // b_j - sum coeff_i b_i = 0, so the syzygy is (-coeff..., +1 at j).
        support.push_back(j);
        lam_at.push_back(Rat(-1));
        for (auto& c : lam_at) c = -c;
        std::vector<size_t> order(support.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t x, size_t y) { return support[x] < support[y]; });
        Circuit c;
        for (size_t i : order) {
          c.support.push_back(support[i]);
          c.syzygy.push_back(lam_at[i]);
        }
        Rat lead = c.syzygy[0];
        for (auto& x : c.syzygy) {
          x /= lead;
          x.canonicalize();
        }
        found.emplace(c.support, c.syzygy);
      }
    }
  }
  std::vector<Circuit> out;
  for (auto& [sup, lam] : found) out.push_back(Circuit{sup, lam});
  return out;
}

FiberClassification classify_fiber(const ArrangementFamily& fam,
                                   const std::vector<Circuit>& circuits,
                                   const FiberPoint& z) {
  const RatVec& ze = z.require_exact("classify_fiber");
  if (static_cast<int>(ze.size()) != fam.n)
    throw std::invalid_argument("classify_fiber: fiber point has wrong length");
  FiberClassification cls;
  for (const auto& c : circuits)
    if (is_zero(c.f_C(ze))) cls.vanishing_circuits.push_back(c);
  cls.good = cls.vanishing_circuits.empty();
  return cls;
}

namespace {

struct FlatData {
  RatVec point;               // a point of the flat
  std::vector<RatVec> dirs;   // basis of the direction space
  std::vector<int> hyps;      // all j containing the flat
};

// All j such that f_j vanishes identically on the affine subspace
// point + span(dirs).
std::vector<int> containing_hyperplanes(const ArrangementFamily& fam, const RatVec& z,
                                        const RatVec& point, const std::vector<RatVec>& dirs) {
  std::vector<int> out;
  for (int j = 0; j < fam.n; ++j) {
    if (!is_zero(fam.f(j, z, point))) continue;
    bool flat_inside = true;
    for (const auto& d : dirs)
      if (!is_zero(dot(fam.b.row(j), d))) { flat_inside = false; break; }
    if (flat_inside) out.push_back(j);
  }
  return out;
}

}  // namespace

IntersectionPoset intersection_poset(const ArrangementFamily& fam, const RatVec& z) {
  fam.validate();
  // Flats are found top-down: cut each flat of dimension d by every
  // hyperplane not containing it; nonempty sections are flats of
  // dimension d-1.  A flat is identified by the full set of hyperplanes
  // containing it.
  std::map<std::vector<int>, FlatData> flats;
  std::vector<RatVec> ambient_dirs;
  for (int i = 0; i < fam.k; ++i) {
    RatVec e(fam.k);
    e[i] = 1;
    ambient_dirs.push_back(e);
  }
  FlatData ambient{RatVec(fam.k), ambient_dirs, {}};
  std::vector<FlatData> frontier{ambient};
  while (!frontier.empty()) {
    std::vector<FlatData> next;
    for (const auto& x : frontier) {
      for (int j = 0; j < fam.n; ++j) {
        if (std::binary_search(x.hyps.begin(), x.hyps.end(), j)) continue;
        // Solve f_j = 0 on point + span(dirs).
        RatVec grad(x.dirs.size());
        bool constant = true;
        for (size_t s = 0; s < x.dirs.size(); ++s) {
          grad[s] = dot(fam.b.row(j), x.dirs[s]);
          if (!is_zero(grad[s])) constant = false;
        }
        if (constant) continue;  // parallel: empty section
        Rat offset = fam.f(j, z, x.point);
        // Pick the first s with grad[s] != 0, substitute.
        size_t piv = 0;
        while (is_zero(grad[piv])) ++piv;
        RatVec new_point = x.point;
        Rat shift = -offset / grad[piv];
        for (int i = 0; i < fam.k; ++i) new_point[i] += shift * x.dirs[piv][i];
        std::vector<RatVec> new_dirs;
        for (size_t s = 0; s < x.dirs.size(); ++s) {
          if (s == piv) continue;
          Rat c = -grad[s] / grad[piv];
          RatVec d = x.dirs[s];
          for (int i = 0; i < fam.k; ++i) d[i] += c * x.dirs[piv][i];
          new_dirs.push_back(std::move(d));
        }
        std::vector<int> hyps = containing_hyperplanes(fam, z, new_point, new_dirs);
        if (!flats.count(hyps)) {
          FlatData fd{new_point, new_dirs, hyps};
          flats.emplace(hyps, fd);
          next.push_back(std::move(fd));
        }
      }
    }
    frontier = std::move(next);
  }

  IntersectionPoset poset;
  for (auto& [hyps, fd] : flats) {
    PosetFlat pf;
    pf.hyperplanes = hyps;
    pf.dim = static_cast<int>(fd.dirs.size());
    poset.flats.push_back(std::move(pf));
  }
  // Mobius recursion over reverse inclusion; the ambient space contributes 1.
  std::sort(poset.flats.begin(), poset.flats.end(),
            [](const PosetFlat& x, const PosetFlat& y) {
              if (x.dim != y.dim) return x.dim > y.dim;
              return x.hyperplanes < y.hyperplanes;
            });
  for (size_t i = 0; i < poset.flats.size(); ++i) {
    long mu = -1;  // ambient
    for (size_t q = 0; q < i; ++q) {
      const auto& big = poset.flats[q].hyperplanes;
      const auto& small = poset.flats[i].hyperplanes;
      if (big.size() < small.size() &&
          std::includes(small.begin(), small.end(), big.begin(), big.end()))
        mu -= poset.flats[q].mobius;
    }
    poset.flats[i].mobius = mu;
  }
  poset.euler = 1;
  for (const auto& f : poset.flats) poset.euler += f.mobius;
  return poset;
}

long euler_characteristic(const ArrangementFamily& fam, const FiberPoint& z) {
  return intersection_poset(fam, z.require_exact("euler_characteristic")).euler;
}

long independent_alternating_sum(const ArrangementFamily& fam) {
  long sum = 0;
  for (int p = 0; p <= fam.k; ++p) {
    long cnt = static_cast<long>(independent_subsets(fam, p).size());
    sum += (p % 2 == 0) ? cnt : -cnt;
  }
  return sum;
}

}  // namespace arrham
