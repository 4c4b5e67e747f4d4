#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "arrham/rational.hpp"

namespace arrham {

using Cplx = std::complex<double>;

// Dense univariate polynomials, coefficients in ascending degree order.
using RatPoly = RatVec;

inline RatPoly poly_mul(const RatPoly& p, const RatPoly& q) {
  if (p.empty() || q.empty()) return {};
  RatPoly r(p.size() + q.size() - 1);
  for (size_t i = 0; i < p.size(); ++i)
    for (size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
  return r;
}

inline Rat poly_eval(const RatPoly& p, const Rat& x) {
  Rat v = 0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

template <class S>
S poly_eval_s(const RatPoly& p, const S& x) {
  S v = 0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + S(rat_d(p[i]));
  return v;
}

inline RatPoly poly_derivative(const RatPoly& p) {
  if (p.size() <= 1) return {Rat(0)};
  RatPoly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = Rat(static_cast<long>(i)) * p[i];
  return d;
}

inline RatPoly poly_trim(RatPoly p) {
  while (p.size() > 1 && is_zero(p.back())) p.pop_back();
  return p;
}

// All complex roots by the Durand-Kerner iteration (degrees are tiny here).
inline std::vector<std::complex<double>> poly_roots(const RatPoly& poly) {
  RatPoly p = poly_trim(poly);
  int deg = static_cast<int>(p.size()) - 1;
  if (deg <= 0) return {};
  std::vector<std::complex<double>> c(deg + 1);
  double lead = rat_d(p[deg]);
  for (int i = 0; i <= deg; ++i) c[i] = rat_d(p[i]) / lead;
  std::vector<std::complex<double>> roots(deg);
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (int i = 0; i < deg; ++i) {
    acc *= seed;
    roots[i] = acc;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 0;
    for (int i = deg; i >= 0; --i) v = v * x + c[i];
    return v;
  };
  for (int iter = 0; iter < 1000; ++iter) {
    double shift = 0;
    for (int i = 0; i < deg; ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (int j = 0; j < deg; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      std::complex<double> delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      shift = std::max(shift, std::abs(delta));
    }
    if (shift < 1e-14) break;
  }
  return roots;
}

// Greedy multiset match within an absolute tolerance.
inline bool multisets_match(std::vector<std::complex<double>> a,
                            std::vector<std::complex<double>> b, double tol,
                            double* worst = nullptr) {
  if (a.size() != b.size()) return false;
  if (worst) *worst = 0;
  for (const auto& x : a) {
    double best = 1e300;
    size_t best_j = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      double d = std::abs(x - b[j]);
      if (d < best) { best = d; best_j = j; }
    }
    if (b.empty() || best > tol) return false;
    if (worst) *worst = std::max(*worst, best);
    b.erase(b.begin() + best_j);
  }
  return true;
}

}  // namespace arrham
