#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "physarum/rational.hpp"

namespace physarum {

template <class T>
using Vec = std::vector<T>;

using VecD = Vec<double>;
using VecQ = Vec<Rational>;

/* Dense row-major matrix. Used for both the float path (double) and the
 * exact path (Rational); mpq_class keeps its values canonical on every
 * arithmetic operation. */
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      assert(row.size() == cols_);
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }

  Vec<T> row(std::size_t i) const {
    return Vec<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  Vec<T> col(std::size_t j) const {
    Vec<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_cols(const std::vector<std::size_t>& idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
    return out;
  }
  Matrix select_rows(const std::vector<std::size_t>& idx) const {
    Matrix out(idx.size(), cols_);
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(idx[k], j);
    return out;
  }
  Matrix submatrix(const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) const {
    Matrix out(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) out(i, j) = (*this)(r[i], c[j]);
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixD = Matrix<double>;
using MatrixQ = Matrix<Rational>;

template <class T>
Vec<T> operator*(const Matrix<T>& m, const Vec<T>& v) {
  assert(m.cols() == v.size());
  Vec<T> out(m.rows(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    T s(0);
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  assert(a.cols() == b.rows());
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  assert(a.rows() == b.rows() && a.cols() == b.cols());
  Matrix<T> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

// Aᵀv without forming the transpose.
template <class T>
Vec<T> transpose_times(const Matrix<T>& m, const Vec<T>& v) {
  assert(m.rows() == v.size());
  Vec<T> out(m.cols(), T(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (v[i] == T(0)) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += m(i, j) * v[i];
  }
  return out;
}

template <class T>
T dot(const Vec<T>& a, const Vec<T>& b) {
  assert(a.size() == b.size());
  T s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

MatrixD to_double(const MatrixQ& m);
VecD to_double(const VecQ& v);
VecQ to_rational(const VecD& v);

double norm_inf(const VecD& v);
double norm_1(const VecD& v);
Rational norm_inf(const VecQ& v);
Rational norm_1(const VecQ& v);
double dist_inf(const VecD& a, const VecD& b);

}  // namespace physarum
