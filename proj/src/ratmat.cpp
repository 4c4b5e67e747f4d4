#include "arrham/ratmat.hpp"

#include <stdexcept>

namespace arrham {

RatMat::RatMat(std::initializer_list<std::initializer_list<Rat>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ ? static_cast<int>(rows.begin()->size()) : 0;
  a_.resize(static_cast<size_t>(rows_) * cols_);
  int i = 0;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_) throw std::invalid_argument("ragged initializer");
    int j = 0;
    for (const auto& x : r) at(i, j++) = x;
    ++i;
  }
}

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from_rows(const std::vector<RatVec>& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  RatMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw std::invalid_argument("ragged rows");
    for (int j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

RatMat RatMat::from_columns(const std::vector<RatVec>& cols) {
  int c = static_cast<int>(cols.size());
  int r = c ? static_cast<int>(cols[0].size()) : 0;
  RatMat m(r, c);
  for (int j = 0; j < c; ++j) {
    if (static_cast<int>(cols[j].size()) != r) throw std::invalid_argument("ragged columns");
    for (int i = 0; i < r; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

RatVec RatMat::row(int i) const {
  RatVec v(cols_);
  for (int j = 0; j < cols_; ++j) v[j] = at(i, j);
  return v;
}

RatVec RatMat::col(int j) const {
  RatVec v(rows_);
  for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matmul shape mismatch");
  RatMat m(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int l = 0; l < cols_; ++l) {
      const Rat& x = at(i, l);
      if (sgn(x) == 0) continue;
      for (int j = 0; j < o.cols_; ++j) {
        if (sgn(o.at(l, j)) == 0) continue;
        m.at(i, j) += x * o.at(l, j);
      }
    }
  return m;
}

RatVec RatMat::operator*(const RatVec& v) const {
  if (cols_ != static_cast<int>(v.size())) throw std::invalid_argument("matvec shape mismatch");
  RatVec r(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if (sgn(at(i, j)) != 0 && sgn(v[j]) != 0) r[i] += at(i, j) * v[j];
  return r;
}

RatMat RatMat::operator+(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  RatMat m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

RatMat RatMat::operator-(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
  RatMat m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

RatMat RatMat::scaled(const Rat& c) const {
  RatMat m(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = c * a_[i];
  return m;
}

RatMat RatMat::transpose() const {
  RatMat m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m.at(j, i) = at(i, j);
  return m;
}

bool RatMat::operator==(const RatMat& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool RatMat::is_zero() const {
  for (const auto& x : a_)
    if (sgn(x) != 0) return false;
  return true;
}

bool RatMat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

RatMat RatMat::rref(std::vector<int>* pivot_cols) const {
  RatMat m = *this;
  if (pivot_cols) pivot_cols->clear();
  int lead = 0;
  for (int c = 0; c < cols_ && lead < rows_; ++c) {
    int piv = -1;
    for (int i = lead; i < rows_; ++i)
      if (sgn(m.at(i, c)) != 0) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != lead)
      for (int j = 0; j < cols_; ++j) swap(m.at(piv, j), m.at(lead, j));
    Rat inv = 1 / m.at(lead, c);
    for (int j = c; j < cols_; ++j) m.at(lead, j) *= inv;
    for (int i = 0; i < rows_; ++i) {
      if (i == lead || sgn(m.at(i, c)) == 0) continue;
      Rat f = m.at(i, c);
      for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(lead, j);
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++lead;
  }
  return m;
}

int RatMat::rank() const {
  std::vector<int> piv;
  rref(&piv);
  return static_cast<int>(piv.size());
}

std::vector<RatVec> RatMat::kernel() const {
  std::vector<int> piv;
  RatMat r = rref(&piv);
  std::vector<bool> is_piv(cols_, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<RatVec> basis;
  for (int c = 0; c < cols_; ++c) {
    if (is_piv[c]) continue;
    RatVec v(cols_);
    v[c] = 1;
    for (size_t p = 0; p < piv.size(); ++p) v[piv[p]] = -r.at(static_cast<int>(p), c);
    basis.push_back(std::move(v));
  }
  return basis;
}

Rat RatMat::det() const {
  if (rows_ != cols_) throw std::invalid_argument("det of non-square");
  RatMat m = *this;
  Rat d = 1;
  for (int c = 0; c < cols_; ++c) {
    int piv = -1;
    for (int i = c; i < rows_; ++i)
      if (sgn(m.at(i, c)) != 0) { piv = i; break; }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      for (int j = 0; j < cols_; ++j) swap(m.at(piv, j), m.at(c, j));
      d = -d;
    }
    d *= m.at(c, c);
    Rat inv = 1 / m.at(c, c);
    for (int i = c + 1; i < rows_; ++i) {
      if (sgn(m.at(i, c)) == 0) continue;
      Rat f = m.at(i, c) * inv;
      for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(c, j);
    }
  }
  return d;
}

RatMat RatMat::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("inverse of non-square");
  RatMat aug(rows_, 2 * cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_ + i) = 1;
  }
  std::vector<int> piv;
  RatMat r = aug.rref(&piv);
  if (static_cast<int>(piv.size()) != rows_ || piv.back() >= cols_)
    throw std::domain_error("matrix is singular");
  RatMat inv(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) inv.at(i, j) = r.at(i, cols_ + j);
  return inv;
}

RatVec RatMat::charpoly() const {
  if (rows_ != cols_) throw std::invalid_argument("charpoly of non-square");
  int n = rows_;
  // Faddeev-LeVerrier: M_1 = A, c_{n-1} = -tr M_1, M_{q+1} = A(M_q + c_{n-q} I).
  RatVec c(n + 1);
  c[n] = 1;
  RatMat m = *this;
  for (int q = 1; q <= n; ++q) {
    Rat tr = 0;
    for (int i = 0; i < n; ++i) tr += m.at(i, i);
    c[n - q] = -tr / q;
    if (q == n) break;
    for (int i = 0; i < n; ++i) m.at(i, i) += c[n - q];
    m = (*this) * m;
  }
  return c;
}

bool RatMat::solve(const RatVec& b, RatVec* x) const {
  if (static_cast<int>(b.size()) != rows_) throw std::invalid_argument("solve shape mismatch");
  RatMat aug(rows_, cols_ + 1);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
    aug.at(i, cols_) = b[i];
  }
  std::vector<int> piv;
  RatMat r = aug.rref(&piv);
  if (!piv.empty() && piv.back() == cols_) return false;  // inconsistent
  if (x) {
    x->assign(cols_, Rat(0));
    for (size_t p = 0; p < piv.size(); ++p) (*x)[piv[p]] = r.at(static_cast<int>(p), cols_);
  }
  return true;
}

Rat dot(const RatVec& u, const RatVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot shape mismatch");
  Rat s = 0;
  for (size_t i = 0; i < u.size(); ++i)
    if (!is_zero(u[i]) && !is_zero(v[i])) s += u[i] * v[i];
  return s;
}

bool is_zero_vec(const RatVec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

RatVec axpy(const Rat& c, const RatVec& x, const RatVec& y) {
  RatVec r(y);
  for (size_t i = 0; i < x.size(); ++i) r[i] += c * x[i];
  return r;
}

RatVec scale_vec(const Rat& c, const RatVec& x) {
  RatVec r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = c * x[i];
  return r;
}

RatVec normalize_int_vec(const RatVec& v) {
  mpz_class den(1), num_gcd(0);
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  RatVec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i] * Rat(den);
    w[i].canonicalize();
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), w[i].get_num().get_mpz_t());
  }
  if (num_gcd == 0) return w;  // zero vector
  int lead_sign = 0;
  for (const auto& x : w)
    if (sgn(x) != 0) { lead_sign = sgn(x); break; }
  if (lead_sign < 0) num_gcd = -num_gcd;
  for (auto& x : w) {
    x /= Rat(num_gcd);
    x.canonicalize();
  }
  return w;
}

void RatSpan::reduce(RatVec& v) const {
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rat& c = v[pivots_[r]];
    if (sgn(c) != 0) {
      Rat f = c;
      for (size_t j = 0; j < v.size(); ++j) v[j] -= f * rows_[r][j];
    }
  }
}

bool RatSpan::insert(RatVec v) {
  reduce(v);
  int piv = -1;
  for (size_t j = 0; j < v.size(); ++j)
    if (sgn(v[j]) != 0) { piv = static_cast<int>(j); break; }
  if (piv < 0) return false;
  Rat inv = 1 / v[piv];
  for (auto& x : v) x *= inv;
  // Keep existing rows reduced against the new one.
  for (size_t r = 0; r < rows_.size(); ++r) {
    Rat f = rows_[r][piv];
    if (sgn(f) != 0)
      for (size_t j = 0; j < v.size(); ++j) rows_[r][j] -= f * v[j];
  }
  size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + pos, std::move(v));
  pivots_.insert(pivots_.begin() + pos, piv);
  return true;
}

bool RatSpan::contains(RatVec v) const {
  reduce(v);
  return is_zero_vec(v);
}

RatMat coords_in_basis(const std::vector<RatVec>& basis, const RatMat& m) {
  RatMat b = RatMat::from_columns(basis);
  RatMat x(static_cast<int>(basis.size()), m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    RatVec xj;
    if (!b.solve(m.col(j), &xj)) throw std::domain_error("vector not in subspace span");
    RatVec check = b * xj;
    for (int i = 0; i < m.rows(); ++i)
      if (check[i] != m.at(i, j)) throw std::domain_error("vector not in subspace span");
    for (size_t i = 0; i < basis.size(); ++i) x.at(static_cast<int>(i), j) = xj[i];
  }
  return x;
}

RatVec coords_in_basis(const std::vector<RatVec>& basis, const RatVec& v) {
  RatMat m = RatMat::from_columns({v});
  return coords_in_basis(basis, m).col(0);
}

RatMat restrict_operator(const RatMat& op, const std::vector<RatVec>& basis) {
  RatMat images(op.rows(), static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) {
    RatVec img = op * basis[j];
    for (int i = 0; i < op.rows(); ++i) images.at(i, static_cast<int>(j)) = img[i];
  }
  return coords_in_basis(basis, images);
}

int generated_algebra_dimension(const std::vector<RatMat>& ops) {
  if (ops.empty()) return 0;
  int d = ops[0].rows();
  auto vec_of = [d](const RatMat& m) {
    RatVec v;
    v.reserve(static_cast<size_t>(d) * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) v.push_back(m.at(i, j));
    return v;
  };
  RatSpan span;
  std::vector<RatMat> frontier{RatMat::identity(d)};
  span.insert(vec_of(frontier[0]));
  while (!frontier.empty()) {
    std::vector<RatMat> next;
    for (const auto& w : frontier)
      for (const auto& m : ops) {
        RatMat prod = m * w;
        if (span.insert(vec_of(prod))) next.push_back(std::move(prod));
      }
    frontier = std::move(next);
  }
  return span.dim();
}

}  // namespace arrham
