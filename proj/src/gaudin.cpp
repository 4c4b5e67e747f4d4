#include "arrham/gaudin.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace arrham {

namespace {

template <class S>
S from_rat(const Rat& r);
template <>
Rat from_rat<Rat>(const Rat& r) { return r; }
template <>
Cplx from_rat<Cplx>(const Rat& r) { return Cplx(rat_d(r), 0.0); }

}  // namespace

void GaudinData::validate() const {
  if (r <= 0 || N <= 0) throw std::invalid_argument("gaudin data: need r > 0 and N > 0");
  if (alpha_gram.rows() != r || alpha_gram.cols() != r)
    throw std::invalid_argument("gaudin data: alpha_gram must be r x r");
  if (!alpha_gram.is_symmetric()) throw std::invalid_argument("gaudin data: alpha_gram not symmetric");
  for (int i = 0; i < r; ++i)
    if (is_zero(alpha_gram.at(i, i)))
      throw std::invalid_argument("gaudin data: (alpha_i, alpha_i) must be nonzero");
  if (lambda_pairings.rows() != N || lambda_pairings.cols() != r)
    throw std::invalid_argument("gaudin data: lambda_pairings must be N x r");
  if (lambda_gram.rows() != N || lambda_gram.cols() != N || !lambda_gram.is_symmetric())
    throw std::invalid_argument("gaudin data: lambda_gram must be symmetric N x N");
  if (static_cast<int>(kvec.size()) != r) throw std::invalid_argument("gaudin data: kvec size");
  int ktot = 0;
  for (int ki : kvec) {
    if (ki < 0) throw std::invalid_argument("gaudin data: negative k_i");
    ktot += ki;
  }
  if (ktot == 0) throw std::invalid_argument("gaudin data: sum of k_i must be positive");
  if (static_cast<int>(x.size()) != N) throw std::invalid_argument("gaudin data: x size");
  for (int b = 0; b < N; ++b)
    for (int c = b + 1; c < N; ++c)
      if (x[b] == x[c]) throw std::invalid_argument("gaudin data: marked points must be distinct");
  for (int b = 0; b < N; ++b) {
    bool ok = false;
    for (int i = 0; i < r; ++i)
      if (!is_zero(lambda_pairings.at(b, i)) && kvec[i] > 0) ok = true;
    if (!ok)
      throw std::invalid_argument(
          "gaudin data: marked point " + std::to_string(b + 1) +
          " pairs with no color that carries variables");
  }
}

int GaudinData::total_k() const {
  int s = 0;
  for (int ki : kvec) s += ki;
  return s;
}

std::string DiscIndex::label() const {
  switch (kind) {
    case JKind::pair_same:
      return "(" + std::to_string(i + 1) + ")" + std::to_string(l + 1) + "," +
             std::to_string(l2 + 1);
    case JKind::pair_diff:
      return "(" + std::to_string(i + 1) + "," + std::to_string(i2 + 1) + ")" +
             std::to_string(l + 1) + "," + std::to_string(l2 + 1);
    case JKind::point:
    default:
      return "(" + std::to_string(i + 1) + "|x" + std::to_string(b + 1) + ")" +
             std::to_string(l + 1);
  }
}

int DiscriminantalArrangement::var(int color, int slot) const {
  int off = 0;
  for (int i = 0; i < color; ++i) off += data.kvec[i];
  return off + slot;
}

std::vector<int> DiscriminantalArrangement::block_of_point(int b) const {
  std::vector<int> out;
  for (size_t j = 0; j < index.size(); ++j)
    if (index[j].kind == JKind::point && index[j].b == b) out.push_back(static_cast<int>(j));
  return out;
}

RatVec DiscriminantalArrangement::dx_direction(int b) const {
  RatVec xi(fam.n);
  for (int j : block_of_point(b)) xi[j] = 1;
  return xi;
}

DiscriminantalArrangement build_discriminantal(const GaudinData& data) {
  data.validate();
  DiscriminantalArrangement arr;
  arr.data = data;
  int k = data.total_k();

  std::vector<RatVec> rows;
  RatVec weights;
  auto push = [&](const DiscIndex& di, const RatVec& row, const Rat& w, const Rat& z) {
    arr.index.push_back(di);
    rows.push_back(row);
    weights.push_back(w);
    arr.z0.push_back(z);
  };

  // J1: t^{(i)}_l - t^{(i)}_l',  weight (alpha_i, alpha_i), z0 = 0.
  for (int i = 0; i < data.r; ++i)
    for (int l = 0; l < data.kvec[i]; ++l)
      for (int l2 = l + 1; l2 < data.kvec[i]; ++l2) {
        RatVec row(k);
        row[arr.var(i, l)] = 1;
        row[arr.var(i, l2)] = -1;
        push({JKind::pair_same, i, i, l, l2, 0}, row, data.alpha_gram.at(i, i), Rat(0));
      }
  // J2: t^{(i)}_l - t^{(i')}_l' for (alpha_i, alpha_i') != 0, z0 = 0.
  for (int i = 0; i < data.r; ++i)
    for (int i2 = i + 1; i2 < data.r; ++i2) {
      if (is_zero(data.alpha_gram.at(i, i2))) continue;
      for (int l = 0; l < data.kvec[i]; ++l)
        for (int l2 = 0; l2 < data.kvec[i2]; ++l2) {
          RatVec row(k);
          row[arr.var(i, l)] = 1;
          row[arr.var(i2, l2)] = -1;
          push({JKind::pair_diff, i, i2, l, l2, 0}, row, data.alpha_gram.at(i, i2), Rat(0));
        }
    }
  // J3: -t^{(i)}_l + x_b for (Lambda_b, alpha_i) != 0, weight -(Lambda_b, alpha_i).
  for (int i = 0; i < data.r; ++i)
    for (int l = 0; l < data.kvec[i]; ++l)
      for (int b = 0; b < data.N; ++b) {
        if (is_zero(data.lambda_pairings.at(b, i))) continue;
        RatVec row(k);
        row[arr.var(i, l)] = -1;
        push({JKind::point, i, i, l, l, b}, row, Rat(-data.lambda_pairings.at(b, i)), data.x[b]);
      }

  arr.fam.k = k;
  arr.fam.n = static_cast<int>(rows.size());
  arr.fam.b = RatMat::from_rows(rows);
  arr.fam.a = weights;
  for (const auto& di : arr.index) arr.fam.labels.push_back(di.label());
  arr.fam.validate();
  return arr;
}

RatVec gaudin_master_grad(const GaudinData& data, const RatVec& t) {
  int k = data.total_k();
  if (static_cast<int>(t.size()) != k) throw std::invalid_argument("gaudin_master_grad: t size");
  auto var = [&](int i, int l) {
    int off = 0;
    for (int q = 0; q < i; ++q) off += data.kvec[q];
    return off + l;
  };
  RatVec g(k);
  for (int i = 0; i < data.r; ++i)
    for (int l = 0; l < data.kvec[i]; ++l) {
      Rat acc = 0;
      for (int l2 = 0; l2 < data.kvec[i]; ++l2) {
        if (l2 == l) continue;
        acc += data.alpha_gram.at(i, i) / (t[var(i, l)] - t[var(i, l2)]);
      }
      for (int i2 = 0; i2 < data.r; ++i2) {
        if (i2 == i || is_zero(data.alpha_gram.at(i, i2))) continue;
        for (int l2 = 0; l2 < data.kvec[i2]; ++l2)
          acc += data.alpha_gram.at(i, i2) / (t[var(i, l)] - t[var(i2, l2)]);
      }
      for (int b = 0; b < data.N; ++b)
        if (!is_zero(data.lambda_pairings.at(b, i)))
          acc -= data.lambda_pairings.at(b, i) / (t[var(i, l)] - data.x[b]);
      g[var(i, l)] = acc;
    }
  return g;
}

int SkElement::parity() const {
  int sign = 1;
  for (const auto& p : perm) {
    std::vector<int> q = p;
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = i + 1; j < q.size(); ++j)
        if (q[i] > q[j]) sign = -sign;
  }
  return sign;
}

std::vector<SkElement> sk_elements(const std::vector<int>& kvec) {
  std::vector<std::vector<std::vector<int>>> per_color;
  for (int ki : kvec) {
    std::vector<int> p(ki);
    for (int i = 0; i < ki; ++i) p[i] = i;
    std::vector<std::vector<int>> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    per_color.push_back(std::move(all));
  }
  std::vector<SkElement> out;
  std::vector<size_t> pick(kvec.size(), 0);
  for (;;) {
    SkElement e;
    for (size_t i = 0; i < kvec.size(); ++i) e.perm.push_back(per_color[i][pick[i]]);
    out.push_back(std::move(e));
    size_t i = 0;
    while (i < pick.size() && ++pick[i] == per_color[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

long sk_order(const std::vector<int>& kvec) {
  long f = 1;
  for (int ki : kvec)
    for (int q = 2; q <= ki; ++q) f *= q;
  return f;
}

SkAction sk_action(const DiscriminantalArrangement& arr, const HamiltonianFamily& hf,
                   const SkElement& sigma) {
  if (sigma.perm.size() != arr.data.kvec.size())
    throw std::invalid_argument("sk_action: element shape mismatch");
  for (size_t i = 0; i < sigma.perm.size(); ++i)
    if (static_cast<int>(sigma.perm[i].size()) != arr.data.kvec[i])
      throw std::invalid_argument("sk_action: element shape mismatch");

  std::map<std::vector<int>, int> lookup;  // canonical key -> position in J
  auto key_of = [](const DiscIndex& di) {
    return std::vector<int>{static_cast<int>(di.kind), di.i, di.i2, di.l, di.l2, di.b};
  };
  for (size_t j = 0; j < arr.index.size(); ++j) lookup.emplace(key_of(arr.index[j]), static_cast<int>(j));

  SkAction act;
  act.parity = sigma.parity();
  act.j_map.resize(arr.index.size());
  act.j_sign.assign(arr.index.size(), 1);
  for (size_t j = 0; j < arr.index.size(); ++j) {
    DiscIndex di = arr.index[j];
    switch (di.kind) {
      case JKind::pair_same: {
        int a = sigma.perm[di.i][di.l], b = sigma.perm[di.i][di.l2];
        if (a > b) {
          std::swap(a, b);
          act.j_sign[j] = -1;  // orientation of t_l - t_l' flips
        }
        di.l = a;
        di.l2 = b;
        break;
      }
      case JKind::pair_diff:
        di.l = sigma.perm[di.i][di.l];
        di.l2 = sigma.perm[di.i2][di.l2];
        break;
      case JKind::point:
        di.l = sigma.perm[di.i][di.l];
        di.l2 = di.l;
        break;
    }
    auto it = lookup.find(key_of(di));
    if (it == lookup.end()) throw std::logic_error("sk_action: image index missing");
    act.j_map[j] = it->second;
  }

  act.on_v = RatMat(hf.top.size(), hf.top.size());
  for (int col = 0; col < hf.top.size(); ++col) {
    std::vector<int> tuple;
    for (int j : hf.top.subsets[col]) tuple.push_back(act.j_map[j]);
    int sign = sort_sign(tuple);
    int row = hf.top.find(tuple);
    if (row < 0 || sign == 0) throw std::logic_error("sk_action: image of basis subset not in basis");
    act.on_v.at(row, col) = sign;
  }
  return act;
}

RatMat antisymmetrizer(const DiscriminantalArrangement& arr, const HamiltonianFamily& hf) {
  RatMat ant(hf.top.size(), hf.top.size());
  for (const auto& sigma : sk_elements(arr.data.kvec)) {
    SkAction act = sk_action(arr, hf, sigma);
    ant = ant + act.on_v.scaled(Rat(act.parity));
  }
  return ant;
}

TensorModule TensorModule::sl2(std::vector<long> m) {
  TensorModule mod;
  mod.gl2 = false;
  mod.hw = std::move(m);
  mod.N = static_cast<int>(mod.hw.size());
  mod.dim = 1;
  for (long mb : mod.hw) {
    if (mb < 0) throw std::invalid_argument("tensor module: negative highest weight");
    mod.dims.push_back(mb + 1);
    mod.dim *= mb + 1;
  }
  mod.strides.assign(mod.N, 1);
  for (int b = mod.N - 2; b >= 0; --b) mod.strides[b] = mod.strides[b + 1] * mod.dims[b + 1];
  mod.shapovalov.assign(mod.dim, Rat(1));
  for (long idx = 0; idx < mod.dim; ++idx) {
    auto s = mod.state_of(idx);
    Rat g = 1;
    for (int b = 0; b < mod.N; ++b)
      for (long q = 1; q <= s[b]; ++q) g *= Rat(q) * Rat(mod.hw[b] - q + 1);
    mod.shapovalov[idx] = g;
  }
  return mod;
}

TensorModule TensorModule::gl2_rows(std::vector<long> lam) {
  TensorModule mod = sl2(std::move(lam));  // same state space and Shapovalov diagonal
  mod.gl2 = true;
  return mod;
}

long TensorModule::state_index(const std::vector<long>& s) const {
  long idx = 0;
  for (int b = 0; b < N; ++b) idx += s[b] * strides[b];
  return idx;
}

std::vector<long> TensorModule::state_of(long idx) const {
  std::vector<long> s(N);
  for (int b = 0; b < N; ++b) {
    s[b] = idx / strides[b];
    idx %= strides[b];
  }
  return s;
}

RatMat TensorModule::factor_op(int b, const std::string& which) const {
  RatMat m(static_cast<int>(dim), static_cast<int>(dim));
  for (long idx = 0; idx < dim; ++idx) {
    auto s = state_of(idx);
    long sb = s[b], mb = hw[b];
    auto put = [&](long new_sb, const Rat& coeff) {
      if (new_sb < 0 || new_sb > mb || is_zero(coeff)) return;
      auto s2 = s;
      s2[b] = new_sb;
      m.at(static_cast<int>(state_index(s2)), static_cast<int>(idx)) += coeff;
    };
    if (!gl2) {
      if (which == "E") put(sb - 1, Rat(sb) * Rat(mb - sb + 1));
      else if (which == "F") put(sb + 1, Rat(1));
      else if (which == "H") put(sb, Rat(mb - 2 * sb));
      else throw std::invalid_argument("factor_op: unknown sl2 generator " + which);
    } else {
      if (which == "e12") put(sb - 1, Rat(sb) * Rat(mb - sb + 1));
      else if (which == "e21") put(sb + 1, Rat(1));
      else if (which == "e11") put(sb, Rat(mb - sb));
      else if (which == "e22") put(sb, Rat(sb));
      else throw std::invalid_argument("factor_op: unknown gl2 generator " + which);
    }
  }
  return m;
}

RatMat TensorModule::global_op(const std::string& which) const {
  RatMat m(static_cast<int>(dim), static_cast<int>(dim));
  for (int b = 0; b < N; ++b) m = m + factor_op(b, which);
  return m;
}

RatMat TensorModule::omega_pair(int b, int c) const {
  if (!gl2) {
    RatMat ef = factor_op(b, "E") * factor_op(c, "F");
    RatMat fe = factor_op(b, "F") * factor_op(c, "E");
    RatMat hh = factor_op(b, "H") * factor_op(c, "H");
    return ef + fe + hh.scaled(rat_of(1, 2));
  }
  RatMat m(static_cast<int>(dim), static_cast<int>(dim));
  const char* gens[2][2] = {{"e11", "e12"}, {"e21", "e22"}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m = m + factor_op(b, gens[i][j]) * factor_op(c, gens[j][i]);
  return m;
}

std::vector<long> TensorModule::weight_states(long k_total) const {
  std::vector<long> out;
  for (long idx = 0; idx < dim; ++idx) {
    auto s = state_of(idx);
    long sum = 0;
    for (long v : s) sum += v;
    if (sum == k_total) out.push_back(idx);
  }
  return out;
}

std::vector<RatVec> TensorModule::sing_weight_basis(long k_total) const {
  auto states = weight_states(k_total);
  RatMat raise = global_op(gl2 ? "e12" : "E");
  RatMat sub(static_cast<int>(dim), static_cast<int>(states.size()));
  for (size_t c = 0; c < states.size(); ++c)
    for (long r = 0; r < dim; ++r) sub.at(static_cast<int>(r), static_cast<int>(c)) = raise.at(static_cast<int>(r), static_cast<int>(states[c]));
  auto ker = sub.kernel();
  std::vector<RatVec> out;
  for (const auto& kv : ker) {
    RatVec full(dim);
    for (size_t c = 0; c < states.size(); ++c) full[states[c]] = kv[c];
    out.push_back(std::move(full));
  }
  return out;
}

std::vector<RatMat> gaudin_hamiltonians(const TensorModule& mod, const RatVec& x) {
  if (static_cast<int>(x.size()) != mod.N)
    throw std::invalid_argument("gaudin_hamiltonians: x size mismatch");
  for (int b = 0; b < mod.N; ++b)
    for (int c = b + 1; c < mod.N; ++c)
      if (x[b] == x[c]) throw std::invalid_argument("gaudin_hamiltonians: coincident marked points");
  std::vector<RatMat> ks;
  for (int b = 0; b < mod.N; ++b) {
    RatMat m(static_cast<int>(mod.dim), static_cast<int>(mod.dim));
    for (int c = 0; c < mod.N; ++c) {
      if (c == b) continue;
      m = m + mod.omega_pair(b, c).scaled(Rat(1) / (x[b] - x[c]));
    }
    ks.push_back(std::move(m));
  }
  return ks;
}

Rat gaudin_scalar_shift(const GaudinData& data, int b) {
  Rat c = 0;
  for (int q = 0; q < data.N; ++q) {
    if (q == b) continue;
    c += data.lambda_gram.at(b, q) / (data.x[b] - data.x[q]);
  }
  return c;
}

template <class S>
S bethe_eigenvalue(const GaudinData& data, int b, const std::vector<S>& t) {
  S lam = from_rat<S>(Rat(0));
  for (int c = 0; c < data.N; ++c) {
    if (c == b) continue;
    lam += from_rat<S>(data.lambda_gram.at(b, c)) /
           from_rat<S>(Rat(data.x[b] - data.x[c]));
  }
  int pos = 0;
  for (int i = 0; i < data.r; ++i)
    for (int l = 0; l < data.kvec[i]; ++l, ++pos)
      lam -= from_rat<S>(data.lambda_pairings.at(b, i)) /
             (from_rat<S>(data.x[b]) - t[pos]);
  return lam;
}

template Rat bethe_eigenvalue<Rat>(const GaudinData&, int, const std::vector<Rat>&);
template Cplx bethe_eigenvalue<Cplx>(const GaudinData&, int, const std::vector<Cplx>&);

template <class S>
std::vector<S> weight_function(const TensorModule& mod, const std::vector<S>& x,
                               const std::vector<S>& t) {
  int k = static_cast<int>(t.size());
  int n_pts = mod.N;
  if (static_cast<int>(x.size()) != n_pts)
    throw std::invalid_argument("weight_function: x size mismatch");
  std::vector<S> omega(mod.dim, from_rat<S>(Rat(0)));

  // Compositions b_1 + ... + b_N = k with b_e within the factor range.
  std::vector<long> comp(n_pts, 0);
  std::vector<int> vars(k);
  for (int i = 0; i < k; ++i) vars[i] = i;
  std::function<void(int, long)> rec = [&](int e, long left) {
    if (e == n_pts - 1) {
      if (left > mod.hw[e]) return;
      comp[e] = left;
      // All assignments of the k variables to the letter slots.
      std::vector<int> perm = vars;
      S total = from_rat<S>(Rat(0));
      do {
        S w = from_rat<S>(Rat(1));
        int pos = 0;
        bool singular_factor = false;
        for (int q = 0; q < n_pts && !singular_factor; ++q) {
          for (long u = 0; u + 1 < comp[q]; ++u) {
            S diff = t[perm[pos + u]] - t[perm[pos + u + 1]];
            w /= diff;
          }
          if (comp[q] > 0) {
            S last = t[perm[pos + comp[q] - 1]] - x[q];
            w /= last;
          }
          pos += static_cast<int>(comp[q]);
        }
        total += w;
      } while (std::next_permutation(perm.begin(), perm.end()));
      long idx = mod.state_index(comp);
      omega[idx] += total;
      return;
    }
    for (long v = 0; v <= std::min<long>(left, mod.hw[e]); ++v) {
      comp[e] = v;
      rec(e + 1, left - v);
    }
  };
  rec(0, k);
  return omega;
}

template std::vector<Rat> weight_function<Rat>(const TensorModule&, const std::vector<Rat>&,
                                               const std::vector<Rat>&);
template std::vector<Cplx> weight_function<Cplx>(const TensorModule&, const std::vector<Cplx>&,
                                                 const std::vector<Cplx>&);

namespace {

std::vector<Cplx> apply_rat_matrix(const RatMat& m, const std::vector<Cplx>& v) {
  std::vector<Cplx> out(m.rows(), Cplx(0, 0));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!is_zero(m.at(i, j))) out[i] += rat_d(m.at(i, j)) * v[j];
  return out;
}

double vec_norm(const std::vector<Cplx>& v) {
  double m = 0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

Cplx complex_hess_det(const ArrangementFamily& fam, const std::vector<double>& z,
                      const std::vector<Cplx>& t) {
  int k = fam.k;
  std::vector<std::vector<Cplx>> h(k, std::vector<Cplx>(k, Cplx(0, 0)));
  for (int j = 0; j < fam.n; ++j) {
    Cplx fj(z[j], 0);
    for (int i = 0; i < k; ++i) fj += rat_d(fam.b.at(j, i)) * t[i];
    Cplx f2 = fj * fj;
    for (int i = 0; i < k; ++i)
      for (int l = 0; l < k; ++l)
        h[i][l] -= rat_d(fam.a[j]) * rat_d(fam.b.at(j, i)) * rat_d(fam.b.at(j, l)) / f2;
  }
  // Gaussian elimination determinant.
  Cplx det(1, 0);
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int i = c + 1; i < k; ++i)
      if (std::abs(h[i][c]) > std::abs(h[piv][c])) piv = i;
    if (piv != c) { std::swap(h[c], h[piv]); det = -det; }
    if (h[c][c] == Cplx(0, 0)) return Cplx(0, 0);
    det *= h[c][c];
    for (int i = c + 1; i < k; ++i) {
      Cplx f = h[i][c] / h[c][c];
      for (int l = c; l < k; ++l) h[i][l] -= f * h[c][l];
    }
  }
  return det;
}

}  // namespace

BetheCheck check_bethe_vector(const TensorModule& mod, const GaudinData& data,
                              const DiscriminantalArrangement& arr,
                              const std::vector<Cplx>& t, double tol) {
  BetheCheck chk;
  chk.t = t;
  std::vector<Cplx> xc;
  for (const auto& xb : data.x) xc.push_back(Cplx(rat_d(xb), 0));
  std::vector<Cplx> omega = weight_function<Cplx>(mod, xc, t);
  chk.coords = omega;
  double wnorm = vec_norm(omega);
  chk.nonzero = wnorm > 1e-12;

  // weight-space and singularity membership
  {
    long ktot = data.total_k();
    RatMat raise = mod.global_op(mod.gl2 ? "e12" : "E");
    std::vector<Cplx> up = apply_rat_matrix(raise, omega);
    double rel = vec_norm(up) / std::max(1.0, wnorm);
    chk.worst_rel = std::max(chk.worst_rel, rel);
    if (rel > tol) chk.in_sing_weight_space = false;
    for (long idx = 0; idx < mod.dim; ++idx) {
      auto s = mod.state_of(idx);
      long sum = 0;
      for (long v : s) sum += v;
      if (sum != ktot && std::abs(omega[idx]) > tol * std::max(1.0, wnorm))
        chk.in_sing_weight_space = false;
    }
  }

  // The eigen and norm identities hold at critical points only.
  std::vector<double> zd;
  for (const auto& zz : arr.z0) zd.push_back(rat_d(zz));
  double residual = 0;
  {
    int k = arr.fam.k;
    for (int i = 0; i < k; ++i) {
      Cplx g(0, 0);
      for (int j = 0; j < arr.fam.n; ++j) {
        Cplx fj(zd[j], 0);
        for (int q = 0; q < k; ++q) fj += rat_d(arr.fam.b.at(j, q)) * t[q];
        g += rat_d(arr.fam.a[j]) * rat_d(arr.fam.b.at(j, i)) / fj;
      }
      residual = std::max(residual, std::abs(g));
    }
  }
  if (residual > 1e-6) return chk;  // not critical: vector returned, asserts skipped

  auto ks = gaudin_hamiltonians(mod, data.x);
  for (int b = 0; b < data.N; ++b) {
    Cplx lam = bethe_eigenvalue<Cplx>(data, b, t);
    chk.eigenvalues.push_back(lam);
    std::vector<Cplx> kv = apply_rat_matrix(ks[b], omega);
    double worst = 0;
    for (long i = 0; i < mod.dim; ++i) worst = std::max(worst, std::abs(kv[i] - lam * omega[i]));
    double rel = worst / std::max(1.0, std::abs(lam) * wnorm);
    chk.worst_rel = std::max(chk.worst_rel, rel);
    if (rel > tol) chk.eigenvector = false;
  }

  {
    Cplx norm(0, 0);
    for (long i = 0; i < mod.dim; ++i) norm += rat_d(mod.shapovalov[i]) * omega[i] * omega[i];
    Cplx hd = complex_hess_det(arr.fam, zd, t);
    double rel = std::abs(norm - hd) / std::max(1.0, std::abs(hd));
    chk.worst_rel = std::max(chk.worst_rel, rel);
    if (rel > tol) chk.norm_identity = false;
  }
  return chk;
}

RatPoly k1_bethe_numerator(const ArrangementFamily& fam, const RatVec& z) {
  if (fam.k != 1) throw std::invalid_argument("k1_bethe_numerator: family must have k = 1");
  RatPoly num{Rat(0)};
  for (int j = 0; j < fam.n; ++j) {
    RatPoly term{fam.a[j] * fam.b.at(j, 0)};
    for (int i = 0; i < fam.n; ++i) {
      if (i == j) continue;
      term = poly_mul(term, RatPoly{z[i], fam.b.at(i, 0)});
    }
    if (term.size() > num.size()) num.resize(term.size());
    for (size_t q = 0; q < term.size(); ++q) num[q] += term[q];
  }
  return poly_trim(num);
}

std::vector<Cplx> k1_bethe_roots(const ArrangementFamily& fam, const RatVec& z) {
  RatPoly num = k1_bethe_numerator(fam, z);
  std::vector<Cplx> roots = poly_roots(num);
  // Newton polish on Phi' (rational function; avoids clustered-root drift).
  std::vector<double> zd;
  for (const auto& x : z) zd.push_back(rat_d(x));
  for (auto& root : roots)
    for (int it = 0; it < 50; ++it) {
      Cplx g(0, 0), h(0, 0);
      for (int j = 0; j < fam.n; ++j) {
        double bj = rat_d(fam.b.at(j, 0)), aj = rat_d(fam.a[j]);
        Cplx fj = zd[j] + bj * root;
        g += aj * bj / fj;
        h -= aj * bj * bj / (fj * fj);
      }
      if (std::abs(g) < 1e-14 || std::abs(h) == 0.0) break;
      root -= g / h;
    }
  return roots;
}

SpectraReport geometric_vs_gaudin_spectra(const DiscriminantalArrangement& arr,
                                          const TensorModule& mod, double tol) {
  SpectraReport rep;
  HamiltonianFamily hf = HamiltonianFamily::build(arr.fam);
  FiberPoint z0 = FiberPoint::from_exact(arr.z0);
  if (!classify_fiber(arr.fam, hf.circuits, z0).good)
    throw std::invalid_argument(
        "geometric_vs_gaudin_spectra: special fiber is bad; this path needs k = 1 data");
  SingBasis sing = sing_basis(arr.fam);
  rep.geometric_dim = sing.dim();
  auto gaudin_sing = mod.sing_weight_basis(arr.data.total_k());
  rep.gaudin_dim = static_cast<int>(gaudin_sing.size());
  rep.dims_match = rep.geometric_dim == rep.gaudin_dim;
  if (!rep.dims_match) return rep;

  auto ks = gaudin_hamiltonians(mod, arr.data.x);
  rep.charpoly_equal = true;
  rep.multiset_within_tol = true;
  for (int b = 0; b < arr.data.N; ++b) {
    RatMat geo(hf.top.size(), hf.top.size());
    for (int j : arr.block_of_point(b)) geo = geo + hf.k_at(arr.z0, j);
    RatMat geo_r = restrict_operator(geo, sing.vectors);
    RatMat gau_r = restrict_operator(ks[b], gaudin_sing);
    Rat cb = gaudin_scalar_shift(arr.data, b);
    for (int i = 0; i < gau_r.rows(); ++i) gau_r.at(i, i) -= cb;
    if (!(geo_r.charpoly() == gau_r.charpoly())) rep.charpoly_equal = false;
    auto geo_spec = poly_roots(geo_r.charpoly());
    auto gau_spec = poly_roots(gau_r.charpoly());
    double worst = 0;
    if (!multisets_match(geo_spec, gau_spec, tol, &worst)) rep.multiset_within_tol = false;
    rep.worst = std::max(rep.worst, worst);
    rep.geometric_spectra.push_back(std::move(geo_spec));
    rep.gaudin_spectra.push_back(std::move(gau_spec));
  }
  return rep;
}

RatMat gl2_e_of_u(const TensorModule& mod, int i, int j, const RatVec& x, const Rat& u) {
  if (!mod.gl2) throw std::invalid_argument("gl2_e_of_u: module is not gl2");
  std::string which = "e" + std::to_string(i) + std::to_string(j);
  RatMat m(static_cast<int>(mod.dim), static_cast<int>(mod.dim));
  for (int b = 0; b < mod.N; ++b) {
    if (u == x[b]) throw std::domain_error("gl2_e_of_u: u hits the pole x_" + std::to_string(b + 1));
    m = m + mod.factor_op(b, which).scaled(Rat(1) / (u - x[b]));
  }
  return m;
}

RatMat gl2_b1(const TensorModule& mod, const RatVec& x, const Rat& u) {
  return (gl2_e_of_u(mod, 1, 1, x, u) + gl2_e_of_u(mod, 2, 2, x, u)).scaled(Rat(-1));
}

RatMat gl2_b2(const TensorModule& mod, const RatVec& x, const Rat& u) {
  RatMat e11u = gl2_e_of_u(mod, 1, 1, x, u);
  RatMat e22u = gl2_e_of_u(mod, 2, 2, x, u);
  RatMat e21u = gl2_e_of_u(mod, 2, 1, x, u);
  RatMat e12u = gl2_e_of_u(mod, 1, 2, x, u);
  // e22'(u) = -sum_b e22^{(b)} / (u - x_b)^2
  RatMat e22p(static_cast<int>(mod.dim), static_cast<int>(mod.dim));
  for (int b = 0; b < mod.N; ++b) {
    Rat d = u - x[b];
    e22p = e22p - mod.factor_op(b, "e22").scaled(Rat(1) / (d * d));
  }
  return e11u * e22u - e22p - e21u * e12u;
}

template <class S>
S dphi_g1(const GaudinData& data, const S& u) {
  if (data.r != 1) throw std::invalid_argument("dphi_g1: rank-1 data required");
  S g = from_rat<S>(Rat(0));
  for (int b = 0; b < data.N; ++b)
    g -= from_rat<S>(data.lambda_pairings.at(b, 0)) / (u - from_rat<S>(data.x[b]));
  return g;
}

template <class S>
S dphi_g2(const GaudinData& data, const S& u, const std::vector<S>& t) {
  if (data.r != 1) throw std::invalid_argument("dphi_g2: rank-1 data required");
  S log_t1 = from_rat<S>(Rat(0));
  for (int b = 0; b < data.N; ++b)
    log_t1 += from_rat<S>(data.lambda_pairings.at(b, 0)) / (u - from_rat<S>(data.x[b]));
  S log_q1 = from_rat<S>(Rat(0)), log_q1_deriv = from_rat<S>(Rat(0));
  for (const auto& tl : t) {
    S d = u - tl;
    log_q1 += from_rat<S>(Rat(1)) / d;
    log_q1_deriv -= from_rat<S>(Rat(1)) / (d * d);
  }
  return (log_t1 - log_q1) * log_q1 - log_q1_deriv;
}

template Rat dphi_g1<Rat>(const GaudinData&, const Rat&);
template Cplx dphi_g1<Cplx>(const GaudinData&, const Cplx&);
template Rat dphi_g2<Rat>(const GaudinData&, const Rat&, const std::vector<Rat>&);
template Cplx dphi_g2<Cplx>(const GaudinData&, const Cplx&, const std::vector<Cplx>&);

}  // namespace arrham
