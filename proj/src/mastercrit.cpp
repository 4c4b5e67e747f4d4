#include "arrham/mastercrit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include "arrham/hamiltonians.hpp"

namespace arrham {

MasterEval master_eval(const ArrangementFamily& fam, const std::vector<double>& z,
                       const std::vector<double>& t) {
  MasterEval e;
  e.grad.assign(fam.k, 0.0);
  e.hess.assign(fam.k, std::vector<double>(fam.k, 0.0));
  for (int j = 0; j < fam.n; ++j) {
    double fj = fam.f_d(j, z, t);
    double aj = rat_d(fam.a[j]);
    e.value += aj * std::log(std::fabs(fj));
    for (int i = 0; i < fam.k; ++i) {
      double bji = rat_d(fam.b.at(j, i));
      e.grad[i] += aj * bji / fj;
      for (int l = 0; l < fam.k; ++l)
        e.hess[i][l] -= aj * bji * rat_d(fam.b.at(j, l)) / (fj * fj);
    }
  }
  return e;
}

RatVec master_grad_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t) {
  RatVec g(fam.k);
  for (int j = 0; j < fam.n; ++j) {
    Rat fj = fam.f(j, z, t);
    if (is_zero(fj)) throw std::domain_error("master_grad_exact: t lies on a hyperplane");
    for (int i = 0; i < fam.k; ++i) g[i] += fam.a[j] * fam.b.at(j, i) / fj;
  }
  return g;
}

RatMat master_hess_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t) {
  RatMat h(fam.k, fam.k);
  for (int j = 0; j < fam.n; ++j) {
    Rat fj = fam.f(j, z, t);
    if (is_zero(fj)) throw std::domain_error("master_hess_exact: t lies on a hyperplane");
    Rat f2 = fj * fj;
    for (int i = 0; i < fam.k; ++i)
      for (int l = 0; l < fam.k; ++l) h.at(i, l) -= fam.a[j] * fam.b.at(j, i) * fam.b.at(j, l) / f2;
  }
  return h;
}

Rat master_hess_det_exact(const ArrangementFamily& fam, const RatVec& z, const RatVec& t) {
  return master_hess_exact(fam, z, t).det();
}

namespace {

std::vector<int> sign_vector_at(const ArrangementFamily& fam, const RatVec& z, const RatVec& t) {
  std::vector<int> s(fam.n);
  for (int j = 0; j < fam.n; ++j) s[j] = sgn(fam.f(j, z, t));
  return s;
}

// Recession cone {d : s_j (b_j . d) >= 0 for all j} is trivial iff the sign
// matrix has full rank and no (k-1)-subset of rows spans a feasible ray.
bool recession_cone_trivial(const ArrangementFamily& fam, const std::vector<int>& sign) {
  RatMat m(fam.n, fam.k);
  for (int j = 0; j < fam.n; ++j)
    for (int i = 0; i < fam.k; ++i) m.at(j, i) = Rat(sign[j]) * fam.b.at(j, i);
  if (m.rank() < fam.k) return false;  // cone contains a line
  auto feasible = [&](const RatVec& d) {
    for (int j = 0; j < fam.n; ++j)
      if (sgn(dot(m.row(j), d)) < 0) return false;
    return true;
  };
  // Pointed cone: any extreme ray solves k-1 linearly independent active rows.
  std::vector<int> idx(fam.k - 1);
  if (fam.k == 1) {
    RatVec d{Rat(1)};
    if (feasible(d)) return false;
    d[0] = -1;
    return !feasible(d);
  }
  std::vector<int> sel(fam.k - 1);
  for (int i = 0; i < fam.k - 1; ++i) sel[i] = i;
  for (;;) {
    std::vector<RatVec> rows;
    for (int j : sel) rows.push_back(m.row(j));
    auto ker = RatMat::from_rows(rows).kernel();
    if (ker.size() == 1) {
      if (feasible(ker[0])) return false;
      RatVec neg = scale_vec(Rat(-1), ker[0]);
      if (feasible(neg)) return false;
    }
    int i = fam.k - 2;
    while (i >= 0 && sel[i] == fam.n - (fam.k - 1) + i) --i;
    if (i < 0) break;
    ++sel[i];
    for (int q = i + 1; q < fam.k - 1; ++q) sel[q] = sel[q - 1] + 1;
  }
  return true;
}

}  // namespace

std::vector<RegionCell> enumerate_bounded_regions(const ArrangementFamily& fam, const RatVec& z) {
  fam.validate();
  // Vertices: solutions of independent k-subsets, deduplicated.
  std::vector<RatVec> vertices;
  for (const auto& sub : independent_subsets(fam, fam.k)) {
    std::vector<RatVec> rows;
    RatVec rhs;
    for (int j : sub) {
      rows.push_back(fam.b.row(j));
      rhs.push_back(-z[j]);
    }
    RatVec v;
    if (!RatMat::from_rows(rows).solve(rhs, &v)) continue;
    if (std::find(vertices.begin(), vertices.end(), v) == vertices.end())
      vertices.push_back(std::move(v));
  }

  std::map<std::vector<int>, RatVec> cells;  // sign vector -> witness
  auto consider = [&](const RatVec& t) {
    std::vector<int> s = sign_vector_at(fam, z, t);
    for (int x : s)
      if (x == 0) return;
    cells.emplace(std::move(s), t);
  };

  // Every bounded k-cell is a polytope, so it has k+1 affinely independent
  // vertices among the global vertex list; their centroid is interior.
  int m = static_cast<int>(vertices.size());
  if (m >= fam.k + 1) {
    std::vector<int> sel(fam.k + 1);
    for (int i = 0; i <= fam.k; ++i) sel[i] = i;
    for (;;) {
      // Affine independence: differences from the first span R^k.
      std::vector<RatVec> diffs;
      for (int q = 1; q <= fam.k; ++q) {
        RatVec d(fam.k);
        for (int i = 0; i < fam.k; ++i) d[i] = vertices[sel[q]][i] - vertices[sel[0]][i];
        diffs.push_back(std::move(d));
      }
      if (RatMat::from_rows(diffs).rank() == fam.k) {
        RatVec centroid(fam.k);
        for (int q = 0; q <= fam.k; ++q)
          for (int i = 0; i < fam.k; ++i) centroid[i] += vertices[sel[q]][i];
        Rat inv = Rat(1) / Rat(fam.k + 1);
        for (auto& x : centroid) x *= inv;
        consider(centroid);
      }
      int i = fam.k;
      while (i >= 0 && sel[i] == m - (fam.k + 1) + i) --i;
      if (i < 0) break;
      ++sel[i];
      for (int q = i + 1; q <= fam.k; ++q) sel[q] = sel[q - 1] + 1;
    }
  }

  // Infinitesimal perturbations around each vertex cover cells with a
  // simple vertex; kept as a second generator since it also yields
  // witnesses close to vertices for thin cells.
  for (const auto& v : vertices) {
    std::vector<int> active;
    for (int j = 0; j < fam.n; ++j)
      if (is_zero(fam.f(j, z, v))) active.push_back(j);
    std::vector<std::vector<int>> bases;
    std::vector<int> sel;
    // independent k-subsets of the active set
    std::function<void(size_t)> rec = [&](size_t start) {
      if (static_cast<int>(sel.size()) == fam.k) {
        std::vector<RatVec> rows;
        for (int j : sel) rows.push_back(fam.b.row(j));
        if (RatMat::from_rows(rows).rank() == fam.k) bases.push_back(sel);
        return;
      }
      for (size_t q = start; q < active.size(); ++q) {
        sel.push_back(active[q]);
        rec(q + 1);
        sel.pop_back();
      }
    };
    rec(0);
    for (const auto& base : bases) {
      std::vector<RatVec> rows;
      for (int j : base) rows.push_back(fam.b.row(j));
      RatMat dual = RatMat::from_rows(rows).inverse();  // columns: directions with b_j.d = e_j
      for (int mask = 0; mask < (1 << fam.k); ++mask) {
        RatVec d(fam.k);
        for (int q = 0; q < fam.k; ++q) {
          Rat sgn_q = (mask >> q) & 1 ? Rat(-1) : Rat(1);
          for (int i = 0; i < fam.k; ++i) d[i] += sgn_q * dual.at(i, q);
        }
        // Largest step keeping all strictly nonzero signs unchanged.
        Rat step(1);
        bool degenerate = false;
        for (int j = 0; j < fam.n; ++j) {
          Rat fj = fam.f(j, z, v);
          Rat gd = dot(fam.b.row(j), d);
          if (is_zero(fj)) {
            if (is_zero(gd)) { degenerate = true; break; }
          } else if (!is_zero(gd)) {
            Rat lim = abs(fj / gd) / 2;
            if (lim < step) step = lim;
          }
        }
        if (degenerate) continue;
        RatVec p = v;
        for (int i = 0; i < fam.k; ++i) p[i] += step * d[i];
        consider(p);
      }
    }
  }

  std::vector<RegionCell> out;
  for (auto& [s, w] : cells) {
    if (!recession_cone_trivial(fam, s)) continue;
    RegionCell cell;
    cell.sign = s;
    cell.witness = w;
    cell.bounded = true;
    out.push_back(std::move(cell));
  }
  return out;
}

namespace {

// Continued-fraction rationalization of a double.
Rat rationalize_double(double x, long maxden) {
  double v = x;
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(v);
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > maxden || q2 < 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = v - fl;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (q1 == 0) return Rat(0);
  return rat_of(p1, q1);
}

// A few exact Newton steps inside the quadratic-convergence basin; returns
// the refined point and its exact residual (as a double upper estimate).
bool exact_newton_refine(const ArrangementFamily& fam, const RatVec& z, RatVec* t,
                         double tol, double* residual) {
  for (int step = 0; step < 10; ++step) {
    RatVec g = master_grad_exact(fam, z, *t);
    double res = 0;
    for (const auto& gi : g) res = std::max(res, std::fabs(rat_d(gi)));
    *residual = res;
    if (res <= tol) return true;
    RatMat h = master_hess_exact(fam, z, *t);
    RatVec neg(g.size());
    for (size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
    RatVec delta;
    if (!h.solve(neg, &delta)) return false;
    for (int i = 0; i < fam.k; ++i) (*t)[i] += delta[i];
  }
  RatVec g = master_grad_exact(fam, z, *t);
  double res = 0;
  for (const auto& gi : g) res = std::max(res, std::fabs(rat_d(gi)));
  *residual = res;
  return res <= tol;
}

}  // namespace

std::vector<CriticalPoint> solve_critical_points(const ArrangementFamily& fam,
                                                 const FiberPoint& z, double tol,
                                                 int max_steps) {
  const RatVec& ze = z.require_exact("solve_critical_points");
  if (!fam.all_weights_positive())
    throw std::invalid_argument("solve_critical_points: weights must be positive");
  auto regions = enumerate_bounded_regions(fam, ze);
  std::vector<double> zd(z.zd);
  // The double phase only needs to land in the quadratic-convergence basin;
  // exact Newton finishes the job.
  const double coarse_tol = std::max(tol, 1e-9);

  std::vector<CriticalPoint> out;
  for (size_t r = 0; r < regions.size(); ++r) {
    std::vector<double> t;
    for (const auto& x : regions[r].witness) t.push_back(rat_d(x));
    auto inside = [&](const std::vector<double>& p) {
      for (int j = 0; j < fam.n; ++j) {
        double fj = fam.f_d(j, zd, p);
        if (fj == 0.0 || (fj > 0) != (regions[r].sign[j] > 0)) return false;
      }
      return true;
    };
    MasterEval e = master_eval(fam, zd, t);
    int step = 0;
    double res = 0;
    for (; step < max_steps; ++step) {
      res = 0;
      for (double g : e.grad) res = std::max(res, std::fabs(g));
      if (res <= coarse_tol) break;
      // Newton direction: solve Hess * d = -grad (k <= 3, partial pivoting).
      int kk = fam.k;
      std::vector<std::vector<double>> m(kk, std::vector<double>(kk + 1));
      for (int i = 0; i < kk; ++i) {
        for (int l = 0; l < kk; ++l) m[i][l] = e.hess[i][l];
        m[i][kk] = -e.grad[i];
      }
      for (int c = 0; c < kk; ++c) {
        int piv = c;
        for (int i = c + 1; i < kk; ++i)
          if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
        std::swap(m[c], m[piv]);
        if (m[c][c] == 0.0)
          throw std::runtime_error("solve_critical_points: singular Hessian in region " +
                                   std::to_string(r));
        for (int i = 0; i < kk; ++i) {
          if (i == c) continue;
          double f = m[i][c] / m[c][c];
          for (int l = c; l <= kk; ++l) m[i][l] -= f * m[c][l];
        }
      }
      std::vector<double> dir(kk);
      for (int i = 0; i < kk; ++i) dir[i] = m[i][kk] / m[i][i];
      // Backtracking: stay in the cell and either increase Phi (strictly
      // concave there) or shrink the gradient residual; the latter keeps
      // full Newton steps usable on the flat floating-point plateau.
      double lam = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 60; ++bt, lam *= 0.5) {
        std::vector<double> cand(t);
        for (int i = 0; i < kk; ++i) cand[i] += lam * dir[i];
        if (!inside(cand)) continue;
        MasterEval ec = master_eval(fam, zd, cand);
        double res_c = 0;
        for (double g : ec.grad) res_c = std::max(res_c, std::fabs(g));
        if (ec.value > e.value || res_c < res || lam < 1e-12) {
          t = std::move(cand);
          e = std::move(ec);
          moved = true;
          break;
        }
      }
      if (!moved)
        throw std::runtime_error("solve_critical_points: line search stalled in region " +
                                 std::to_string(r));
    }
    if (res > coarse_tol)
      throw std::runtime_error("solve_critical_points: Newton did not converge in region " +
                               std::to_string(r));
    CriticalPoint cp;
    cp.region = static_cast<int>(r);
    cp.t_refined.clear();
    for (double x : t) cp.t_refined.push_back(rationalize_double(x, 1000000000000L));
    double exact_res = res;
    if (!exact_newton_refine(fam, ze, &cp.t_refined, tol, &exact_res))
      throw std::runtime_error(
          "solve_critical_points: exact refinement did not converge in region " +
          std::to_string(r));
    cp.residual = exact_res;
    t.clear();
    for (const auto& x : cp.t_refined) t.push_back(rat_d(x));
    cp.t = t;
    e = master_eval(fam, zd, t);
    // det of the k x k Hessian
    {
      int kk = fam.k;
      std::vector<std::vector<double>> h = e.hess;
      double det = 1.0;
      for (int c = 0; c < kk; ++c) {
        int piv = c;
        for (int i = c + 1; i < kk; ++i)
          if (std::fabs(h[i][c]) > std::fabs(h[piv][c])) piv = i;
        if (piv != c) { std::swap(h[c], h[piv]); det = -det; }
        det *= h[c][c];
        if (h[c][c] == 0.0) { det = 0.0; break; }
        for (int i = c + 1; i < kk; ++i) {
          double f = h[i][c] / h[c][c];
          for (int l = c; l < kk; ++l) h[i][l] -= f * h[c][l];
        }
      }
      cp.hess_det = det;
      double scale = 0;
      for (int i = 0; i < kk; ++i)
        for (int l = 0; l < kk; ++l) scale = std::max(scale, std::fabs(e.hess[i][l]));
      cp.nondegenerate = std::fabs(det) > 1e-8 * std::max(1.0, std::pow(scale, kk));
    }
    out.push_back(std::move(cp));
  }
  return out;
}

RatVec special_vector_exact(const ArrangementFamily& fam, const StandardBasis& top,
                            const RatVec& z, const RatVec& t) {
  RatVec v(top.size());
  for (int q = 0; q < top.size(); ++q) {
    std::vector<RatVec> rows;
    Rat denom = 1;
    for (int j : top.subsets[q]) {
      rows.push_back(fam.b.row(j));
      Rat fj = fam.f(j, z, t);
      if (is_zero(fj)) throw std::domain_error("special_vector: t lies on a hyperplane");
      denom *= fj;
    }
    v[q] = RatMat::from_rows(rows).det() / denom;
  }
  return v;
}

std::vector<double> special_vector_d(const ArrangementFamily& fam, const StandardBasis& top,
                                     const std::vector<double>& z,
                                     const std::vector<double>& t) {
  std::vector<double> v(top.size());
  for (int q = 0; q < top.size(); ++q) {
    std::vector<RatVec> rows;
    double denom = 1;
    for (int j : top.subsets[q]) {
      rows.push_back(fam.b.row(j));
      denom *= fam.f_d(j, z, t);
    }
    v[q] = rat_d(RatMat::from_rows(rows).det()) / denom;
  }
  return v;
}

std::vector<std::complex<double>> special_vector_c(const ArrangementFamily& fam,
                                                   const StandardBasis& top,
                                                   const std::vector<double>& z,
                                                   const std::vector<std::complex<double>>& t) {
  std::vector<std::complex<double>> v(top.size());
  for (int q = 0; q < top.size(); ++q) {
    std::vector<RatVec> rows;
    std::complex<double> denom = 1;
    for (int j : top.subsets[q]) {
      rows.push_back(fam.b.row(j));
      std::complex<double> fj = z[j];
      for (int i = 0; i < fam.k; ++i) fj += rat_d(fam.b.at(j, i)) * t[i];
      denom *= fj;
    }
    v[q] = rat_d(RatMat::from_rows(rows).det()) / denom;
  }
  return v;
}

namespace {

double hess_det_d(const MasterEval& e, int k) {
  std::vector<std::vector<double>> h = e.hess;
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int i = c + 1; i < k; ++i)
      if (std::fabs(h[i][c]) > std::fabs(h[piv][c])) piv = i;
    if (piv != c) { std::swap(h[c], h[piv]); det = -det; }
    if (h[c][c] == 0.0) return 0.0;
    det *= h[c][c];
    for (int i = c + 1; i < k; ++i) {
      double f = h[i][c] / h[c][c];
      for (int l = c; l < k; ++l) h[i][l] -= f * h[c][l];
    }
  }
  return det;
}

}  // namespace

NormOrthReport verify_hessian_norm_and_orthogonality(const ArrangementFamily& fam,
                                                     const StandardBasis& top,
                                                     const std::vector<double>& z,
                                                     const std::vector<CriticalPoint>& pts,
                                                     double tol) {
  NormOrthReport rep;
  RatVec gram = gram_diagonal(fam, top);
  std::vector<std::vector<double>> vecs;
  for (const auto& p : pts) vecs.push_back(special_vector_d(fam, top, z, p.t));
  double sign_k = (fam.k % 2 == 0) ? 1.0 : -1.0;
  for (size_t s = 0; s < pts.size(); ++s) {
    double sv = 0;
    for (int q = 0; q < top.size(); ++q) sv += rat_d(gram[q]) * vecs[s][q] * vecs[s][q];
    MasterEval e = master_eval(fam, z, pts[s].t);
    double hd = hess_det_d(e, fam.k);
    double rel = std::fabs(sv - sign_k * hd) / std::max(1.0, std::fabs(hd));
    rep.worst_norm_rel = std::max(rep.worst_norm_rel, rel);
    if (rel > tol) rep.norm_identity = false;
    for (size_t r = s + 1; r < pts.size(); ++r) {
      double cross = 0, ns = 0, nr = 0;
      for (int q = 0; q < top.size(); ++q) {
        double g = rat_d(gram[q]);
        cross += g * vecs[s][q] * vecs[r][q];
        ns += std::fabs(g) * vecs[s][q] * vecs[s][q];
        nr += std::fabs(g) * vecs[r][q] * vecs[r][q];
      }
      double rel2 = std::fabs(cross) / std::max(1.0, std::sqrt(ns * nr));
      rep.worst_orth_rel = std::max(rep.worst_orth_rel, rel2);
      if (rel2 > tol) rep.orthogonal = false;
    }
  }
  return rep;
}

AlgebraReport algebra_correspondence(const ArrangementFamily& fam,
                                     const std::vector<CriticalPoint>& pts, const RatVec& z,
                                     double tol) {
  AlgebraReport rep;
  HamiltonianFamily hf = HamiltonianFamily::build(fam);
  SingBasis sing = sing_basis(fam);
  std::vector<double> zd;
  for (const auto& x : z) zd.push_back(rat_d(x));

  std::vector<std::vector<double>> tuples;
  std::vector<std::vector<double>> vecs;
  double sign_k = (fam.k % 2 == 0) ? 1.0 : -1.0;
  for (const auto& p : pts) {
    if (!p.nondegenerate) {
      ++rep.excluded_degenerate;
      continue;
    }
    std::vector<double> v = special_vector_d(fam, hf.top, zd, p.t);
    // (a) the residue pairing identity: with alpha_p(1) = v(p)/Hess(p) and
    // (1,1)_p = 1/Hess(p), check S(alpha_p(1),alpha_p(1)) = (-1)^k (1,1)_p.
    MasterEval e = master_eval(fam, zd, p.t);
    ResiduePairing rho{p.t, hess_det_d(e, fam.k)};
    double hd = rho.hess_at_p;
    double sv = 0;
    for (int q = 0; q < hf.top.size(); ++q) sv += rat_d(hf.gram[q]) * v[q] * v[q];
    double lhs = sv / (hd * hd);        // S(alpha_p(1), alpha_p(1)) with alpha_p(1) = v(p)/Hess(p)
    double rhs = sign_k * rho.pair_one_one();
    double rel = std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300);
    rep.worst_rel = std::max(rep.worst_rel, rel);
    if (rel > tol) rep.residue_identity = false;

    // (b) eigenvalues of the Hamiltonians on the special vector.
    std::vector<double> tuple(fam.n);
    double vnorm = 0;
    for (double x : v) vnorm = std::max(vnorm, std::fabs(x));
    for (int j = 0; j < fam.n; ++j) {
      double eig = rat_d(fam.a[j]) / fam.f_d(j, zd, p.t);
      tuple[j] = eig;
      RatMat kj = hf.k_at(z, j);
      for (int rrow = 0; rrow < hf.top.size(); ++rrow) {
        double acc = 0;
        for (int ccol = 0; ccol < hf.top.size(); ++ccol)
          acc += rat_d(kj.at(rrow, ccol)) * v[ccol];
        double diff = std::fabs(acc - eig * v[rrow]);
        double relv = diff / std::max(1.0, std::fabs(eig) * vnorm);
        rep.worst_rel = std::max(rep.worst_rel, relv);
        if (relv > tol) rep.eigenvalues_match = false;
      }
    }
    tuples.push_back(std::move(tuple));
    vecs.push_back(std::move(v));
  }

  // (c) tuples pairwise distinct + regular representation.
  for (size_t s = 0; s < tuples.size(); ++s)
    for (size_t r = s + 1; r < tuples.size(); ++r) {
      double diff = 0;
      for (int j = 0; j < fam.n; ++j) diff = std::max(diff, std::fabs(tuples[s][j] - tuples[r][j]));
      if (diff <= tol) rep.tuples_distinct = false;
    }
  std::vector<RatMat> restricted;
  for (int j = 0; j < fam.n; ++j) restricted.push_back(restrict_operator(hf.k_at(z, j), sing.vectors));
  rep.algebra_dim = generated_algebra_dimension(restricted);
  rep.regular_representation = (rep.algebra_dim == static_cast<int>(tuples.size()) &&
                                rep.algebra_dim == sing.dim());
  return rep;
}

}  // namespace arrham
