#pragma once

#include <initializer_list>
#include <vector>

#include "arrham/rational.hpp"

namespace arrham {

// Dense matrix over exact rationals.  All elimination routines use
// deterministic pivoting (first nonzero in column order) so kernel and
// rref bases are reproducible.
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}
  RatMat(std::initializer_list<std::initializer_list<Rat>> rows);

  static RatMat identity(int n);
  static RatMat from_rows(const std::vector<RatVec>& rows);
  static RatMat from_columns(const std::vector<RatVec>& cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  RatVec row(int i) const;
  RatVec col(int j) const;

  RatMat operator*(const RatMat& o) const;
  RatVec operator*(const RatVec& v) const;
  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  RatMat scaled(const Rat& c) const;
  RatMat transpose() const;
  bool operator==(const RatMat& o) const;
  bool is_zero() const;
  bool is_symmetric() const;

  // Reduced row echelon form; pivot column indices optionally returned.
  RatMat rref(std::vector<int>* pivot_cols = nullptr) const;
  int rank() const;
  // Deterministic kernel basis: one vector per free column, unit entry at
  // the free column, solved pivot entries above.
  std::vector<RatVec> kernel() const;
  Rat det() const;
  RatMat inverse() const;  // throws std::domain_error if singular

  // Monic characteristic polynomial coefficients c[0] + c[1] x + ... + x^n
  // (c.size() == n+1, c[n] == 1), via the Faddeev-LeVerrier recursion.
  RatVec charpoly() const;

  // Solves A x = b; returns false if inconsistent. x gets the solution with
  // zeros at free columns.
  bool solve(const RatVec& b, RatVec* x) const;

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

Rat dot(const RatVec& u, const RatVec& v);
bool is_zero_vec(const RatVec& v);
RatVec axpy(const Rat& c, const RatVec& x, const RatVec& y);  // c*x + y
RatVec scale_vec(const Rat& c, const RatVec& x);
// Clears denominators and divides by content; first nonzero entry positive.
RatVec normalize_int_vec(const RatVec& v);

// Incrementally maintained row space in reduced echelon form.  Used for
// subspace membership tests and for growing operator algebras.
class RatSpan {
 public:
  // Returns true if the vector enlarged the span.
  bool insert(RatVec v);
  bool contains(RatVec v) const;
  int dim() const { return static_cast<int>(rows_.size()); }
  const std::vector<RatVec>& rows() const { return rows_; }

 private:
  void reduce(RatVec& v) const;
  std::vector<RatVec> rows_;   // sorted by pivot column, each pivot = 1
  std::vector<int> pivots_;
};

// Coordinates of each column of m in the span of basis (exactly).  Throws
// std::domain_error if some column leaves the span.  basis vectors are the
// columns of the returned relation  B * X = M.
RatMat coords_in_basis(const std::vector<RatVec>& basis, const RatMat& m);
RatVec coords_in_basis(const std::vector<RatVec>& basis, const RatVec& v);

// Restriction of an operator on V to an invariant subspace, in the given
// basis.  Throws if the subspace is not preserved.
RatMat restrict_operator(const RatMat& op, const std::vector<RatVec>& basis);

// Dimension of the unital algebra generated by the given commuting
// operators (closure of span{I} under left multiplication).
int generated_algebra_dimension(const std::vector<RatMat>& ops);

}  // namespace arrham
