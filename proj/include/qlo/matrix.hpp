#pragma once

#include <cassert>
#include <stdexcept>
#include <vector>

#include "qlo/field.hpp"

namespace qlo {

// Small dense row-major matrix over any of the three fields. Everything here
// is plain Gaussian elimination with max-magnitude pivoting; for Rational the
// results are exact, which is what the certificates and traces rely on.
template <class F>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, const F& fill = F{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F{1};
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  F& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const F& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  std::vector<F> row(int i) const {
    return std::vector<F>(data_.begin() + static_cast<std::size_t>(i) * cols_,
                          data_.begin() + static_cast<std::size_t>(i + 1) * cols_);
  }
  std::vector<F> col(int j) const {
    std::vector<F> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_row(int i, const std::vector<F>& v) {
    assert(static_cast<int>(v.size()) == cols_);
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
  }

  Matrix submatrix(const std::vector<int>& rows, const std::vector<int>& cols) const {
    Matrix s(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
    return s;
  }
  // columns with the given indices, all rows
  Matrix select_columns(const std::vector<int>& cols) const {
    std::vector<int> all(rows_);
    for (int i = 0; i < rows_; ++i) all[i] = i;
    return submatrix(all, cols);
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mag<F> l1_distance(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mag<F> d{};
    for (std::size_t k = 0; k < data_.size(); ++k)
      d += FieldTraits<F>::abs(data_[k] - o.data_[k]);
    return d;
  }
  Mag<F> linf_norm() const {
    Mag<F> m{};
    for (const auto& x : data_) {
      auto a = FieldTraits<F>::abs(x);
      if (m < a) m = a;
    }
    return m;
  }

  bool is_symmetric() const {
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<F> data_;
};

template <class F>
Mag<F> vec_l1(const std::vector<F>& v) {
  Mag<F> s{};
  for (const auto& x : v) s += FieldTraits<F>::abs(x);
  return s;
}

template <class F>
Mag<F> vec_l1_distance(const std::vector<F>& a, const std::vector<F>& b) {
  assert(a.size() == b.size());
  Mag<F> s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += FieldTraits<F>::abs(a[i] - b[i]);
  return s;
}

template <class F>
Mag<F> vec_linf(const std::vector<F>& v) {
  Mag<F> m{};
  for (const auto& x : v) {
    auto a = FieldTraits<F>::abs(x);
    if (m < a) m = a;
  }
  return m;
}

template <class F>
F determinant(Matrix<F> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  const int n = m.rows();
  if (n == 0) return F{1};  // empty matrix convention
  F det{1};
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    Mag<F> best{};
    for (int i = k; i < n; ++i) {
      auto a = FieldTraits<F>::abs(m(i, k));
      if (pivot < 0 || best < a) {
        best = a;
        pivot = i;
      }
    }
    if (FieldTraits<F>::is_zero(m(pivot, k))) return F{0};
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(m(k, j), m(pivot, j));
      det = -det;
    }
    det *= m(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (FieldTraits<F>::is_zero(m(i, k))) continue;
      F factor = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
    }
  }
  return det;
}

// Row echelon rank. `tol` only matters for inexact fields; pass 0 for exact.
template <class F>
int rank(Matrix<F> m, double tol = 1e-12) {
  const int nr = m.rows(), nc = m.cols();
  int r = 0;
  for (int c = 0; c < nc && r < nr; ++c) {
    int pivot = -1;
    Mag<F> best{};
    for (int i = r; i < nr; ++i) {
      auto a = FieldTraits<F>::abs(m(i, c));
      if (pivot < 0 || best < a) {
        best = a;
        pivot = i;
      }
    }
    bool zero = FieldTraits<F>::exact ? FieldTraits<F>::is_zero(m(pivot, c))
                                      : (mag_to_double(best) <= tol);
    if (zero) continue;
    if (pivot != r)
      for (int j = 0; j < nc; ++j) std::swap(m(r, j), m(pivot, j));
    for (int i = r + 1; i < nr; ++i) {
      if (FieldTraits<F>::is_zero(m(i, c))) continue;
      F factor = m(i, c) / m(r, c);
      for (int j = c; j < nc; ++j) m(i, j) -= factor * m(r, j);
    }
    ++r;
  }
  return r;
}

// Solves x * A = b for a row vector x (i.e. A^T x^T = b^T).
template <class F>
std::vector<F> solve_row_system(const Matrix<F>& a, const std::vector<F>& b) {
  if (a.rows() != a.cols() || static_cast<int>(b.size()) != a.rows())
    throw std::invalid_argument("solve_row_system: bad shapes");
  const int n = a.rows();
  Matrix<F> m = a.transposed();
  std::vector<F> rhs = b;
  for (int k = 0; k < n; ++k) {
    int pivot = -1;
    Mag<F> best{};
    for (int i = k; i < n; ++i) {
      auto mag = FieldTraits<F>::abs(m(i, k));
      if (pivot < 0 || best < mag) {
        best = mag;
        pivot = i;
      }
    }
    if (FieldTraits<F>::is_zero(m(pivot, k)))
      throw std::domain_error("solve_row_system: singular matrix");
    if (pivot != k) {
      for (int j = k; j < n; ++j) std::swap(m(k, j), m(pivot, j));
      std::swap(rhs[k], rhs[pivot]);
    }
    for (int i = k + 1; i < n; ++i) {
      if (FieldTraits<F>::is_zero(m(i, k))) continue;
      F factor = m(i, k) / m(k, k);
      for (int j = k; j < n; ++j) m(i, j) -= factor * m(k, j);
      rhs[i] -= factor * rhs[k];
    }
  }
  std::vector<F> x(n);
  for (int i = n - 1; i >= 0; --i) {
    F acc = rhs[i];
    for (int j = i + 1; j < n; ++j) acc -= m(i, j) * x[j];
    x[i] = acc / m(i, i);
  }
  return x;
}

// One nonzero c with c * M = 0, or empty if the rows are independent.
template <class F>
std::vector<F> left_kernel_vector(const Matrix<F>& m0) {
  Matrix<F> m = m0.transposed();  // kernel of m0's rows = null space of m0^T
  const int nr = m.rows(), nc = m.cols();
  std::vector<int> pivot_col(nr, -1);
  int r = 0;
  for (int c = 0; c < nc && r < nr; ++c) {
    int pivot = -1;
    Mag<F> best{};
    for (int i = r; i < nr; ++i) {
      auto a = FieldTraits<F>::abs(m(i, c));
      if (pivot < 0 || best < a) {
        best = a;
        pivot = i;
      }
    }
    if (FieldTraits<F>::is_zero(m(pivot, c))) continue;
    if (pivot != r)
      for (int j = 0; j < nc; ++j) std::swap(m(r, j), m(pivot, j));
    for (int i = 0; i < nr; ++i) {
      if (i == r || FieldTraits<F>::is_zero(m(i, c))) continue;
      F factor = m(i, c) / m(r, c);
      for (int j = 0; j < nc; ++j) m(i, j) -= factor * m(r, j);
    }
    pivot_col[r] = c;
    ++r;
  }
  // find a free column and back-substitute
  std::vector<bool> is_pivot(nc, false);
  for (int i = 0; i < r; ++i) is_pivot[pivot_col[i]] = true;
  for (int c = 0; c < nc; ++c) {
    if (is_pivot[c]) continue;
    std::vector<F> kernel(nc, F{});
    kernel[c] = F{1};
    for (int i = 0; i < r; ++i)
      kernel[pivot_col[i]] = -m(i, c) / m(i, pivot_col[i]);
    return kernel;
  }
  return {};
}

}  // namespace qlo
