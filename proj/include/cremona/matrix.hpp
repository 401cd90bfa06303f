#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

#include "cremona/error.hpp"
#include "cremona/integer.hpp"

namespace cremona {

/// Dense row-major matrix over a ring T. Field-only routines below require
/// T to support exact division.
template <class T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T &fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &row : init) {
      require(row.size() == cols_, ErrorKind::InvalidArgument, "ragged matrix");
      for (const auto &x : row) data_.push_back(x);
    }
  }
  static Matrix from_rows(const std::vector<std::vector<T>> &rows) {
    Matrix out(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(rows[i].size() == out.cols_, ErrorKind::InvalidArgument,
              "ragged matrix");
      for (std::size_t j = 0; j < out.cols_; ++j) out(i, j) = rows[i][j];
    }
    return out;
  }
  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T(1);
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_,
                          data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix operator*(const Matrix &o) const {
    require(cols_ == o.rows_, ErrorKind::InvalidArgument,
            "matrix product shape mismatch");
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T &a = (*this)(i, k);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += a * o(k, j);
      }
    return out;
  }
  std::vector<T> operator*(const std::vector<T> &v) const {
    require(cols_ == v.size(), ErrorKind::InvalidArgument,
            "matrix-vector shape mismatch");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  Matrix operator+(const Matrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorKind::InvalidArgument,
            "matrix sum shape mismatch");
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += o.data_[k];
    return out;
  }
  Matrix operator-(const Matrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, ErrorKind::InvalidArgument,
            "matrix difference shape mismatch");
    Matrix out = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] -= o.data_[k];
    return out;
  }
  Matrix scaled(const T &s) const {
    Matrix out = *this;
    for (auto &x : out.data_) x *= s;
    return out;
  }

  bool operator==(const Matrix &o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t k = 0; k < data_.size(); ++k)
      if (!(data_[k] == o.data_[k])) return false;
    return true;
  }
  bool operator!=(const Matrix &o) const { return !(*this == o); }

  bool is_identity() const { return square() && *this == identity(rows_); }

  template <class F> auto map(F f) const {
    using U = decltype(f(std::declval<const T &>()));
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

template <class T> struct RrefResult {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots; // pivot column of each nonzero row
};

/// Reduced row echelon form; the pivot in each column is the first nonzero
/// entry at or below the current row.
template <class T> RrefResult<T> rref(Matrix<T> a) {
  RrefResult<T> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && is_zero(a(p, c))) ++p;
    if (p == a.rows()) continue;
    a.swap_rows(p, r);
    T inv = T(1) / a(r, c);
    for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || is_zero(a(i, c))) continue;
      T f = a(i, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

template <class T> std::size_t rank(const Matrix<T> &a) {
  return rref(a).pivots.size();
}

/// Basis of {v : a v = 0}; one vector per free column, that column set to 1.
template <class T> std::vector<std::vector<T>> nullspace(const Matrix<T> &a) {
  auto rr = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : rr.pivots) is_pivot[c] = true;
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(a.cols(), T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < rr.pivots.size(); ++i)
      v[rr.pivots[i]] = -rr.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// A particular solution of a x = b with free variables set to zero.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T> &a, const std::vector<T> &b) {
  require(a.rows() == b.size(), ErrorKind::InvalidArgument,
          "solve shape mismatch");
  Matrix<T> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto rr = rref(aug);
  if (!rr.pivots.empty() && rr.pivots.back() == a.cols()) return std::nullopt;
  std::vector<T> x(a.cols(), T(0));
  for (std::size_t i = 0; i < rr.pivots.size(); ++i)
    x[rr.pivots[i]] = rr.reduced(i, a.cols());
  return x;
}

template <class T> std::optional<Matrix<T>> inverse(const Matrix<T> &a) {
  require(a.square(), ErrorKind::InvalidArgument, "inverse of non-square");
  std::size_t n = a.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = T(1);
  }
  auto rr = rref(aug);
  if (rr.pivots.size() < n || rr.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix<T> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = rr.reduced(i, n + j);
  return out;
}

template <class T> T determinant(Matrix<T> a) {
  require(a.square(), ErrorKind::InvalidArgument, "determinant of non-square");
  T det(1);
  std::size_t n = a.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(a(p, c))) ++p;
    if (p == n) return T(0);
    if (p != c) {
      a.swap_rows(p, c);
      det = -det;
    }
    det *= a(c, c);
    T inv = T(1) / a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(a(i, c))) continue;
      T f = a(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

/// Characteristic polynomial det(xI - a), coefficients from degree 0 upward.
template <class T> std::vector<T> charpoly(const Matrix<T> &a) {
  require(a.square(), ErrorKind::InvalidArgument, "charpoly of non-square");
  std::size_t n = a.rows();
  std::vector<T> c(n + 1, T(0));
  c[n] = T(1);
  Matrix<T> m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<T> next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    Matrix<T> am = a * m;
    T tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / T(static_cast<long>(k));
  }
  return c;
}

} // namespace cremona
