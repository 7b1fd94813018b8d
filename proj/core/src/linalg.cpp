#include "physarum/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "physarum/errors.hpp"

namespace physarum {

MatrixD to_double(const MatrixQ& m) {
  MatrixD out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

VecD to_double(const VecQ& v) {
  VecD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
  return out;
}

VecQ to_rational(const VecD& v) {
  VecQ out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = rational_from_double(v[i]);
  return out;
}

double norm_inf(const VecD& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double norm_1(const VecD& v) {
  double s = 0;
  for (double x : v) s += std::abs(x);
  return s;
}

Rational norm_inf(const VecQ& v) {
  Rational m = 0;
  for (const auto& x : v) m = std::max(m, abs(x));
  return m;
}

Rational norm_1(const VecQ& v) {
  Rational s = 0;
  for (const auto& x : v) s += abs(x);
  return s;
}

double dist_inf(const VecD& a, const VecD& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

VecD solve_linear(const MatrixD& M, const VecD& rhs) {
  const std::size_t n = M.rows();
  if (M.cols() != n || rhs.size() != n)
    throw Error(ErrorKind::InvalidArgument, "solve_linear: dimension mismatch");
  double scale = 0;
  for (double v : M.data()) scale = std::max(scale, std::abs(v));
  const double tol = 1e-12 * scale;

  MatrixD a = M;
  VecD x = rhs;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) best = std::abs(a(i, k)), p = i;
    if (!(best > tol) || best == 0.0)
      throw Error(ErrorKind::SingularMatrix, "no usable pivot in column " + std::to_string(k));
    if (p != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(x[k], x[p]);
    }
    const double piv = a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / piv;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      x[i] -= f * x[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    double s = x[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

MatrixQ solve_linear(const MatrixQ& M, const MatrixQ& B) {
  const std::size_t n = M.rows();
  if (M.cols() != n || B.rows() != n)
    throw Error(ErrorKind::InvalidArgument, "solve_linear: dimension mismatch");
  MatrixQ a = M;
  MatrixQ x = B;
  const std::size_t k_rhs = B.cols();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error(ErrorKind::SingularMatrix, "exact solve: singular matrix");
    if (p != k) {
      for (std::size_t j = k; j < n; ++j) std::swap(a(k, j), a(p, j));
      for (std::size_t j = 0; j < k_rhs; ++j) std::swap(x(k, j), x(p, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      const Rational f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < k_rhs; ++j) x(i, j) -= f * x(k, j);
      a(i, k) = 0;
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = 0; c < k_rhs; ++c) {
      Rational s = x(k, c);
      for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x(j, c);
      x(k, c) = s / a(k, k);
    }
  }
  return x;
}

VecQ solve_linear(const MatrixQ& M, const VecQ& rhs) {
  MatrixQ B(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) B(i, 0) = rhs[i];
  return solve_linear(M, B).col(0);
}

MatrixQ inverse(const MatrixQ& M) { return solve_linear(M, MatrixQ::identity(M.rows())); }

BareissResult bareiss(const MatrixQ& M) {
  BareissResult res;
  const std::size_t rows = M.rows(), cols = M.cols();
  MatrixQ a = M;
  Rational prev = 1;
  int sign = 1;
  std::size_t r = 0;
  for (std::size_t k = 0; k < cols && r < rows; ++k) {
    std::size_t p = r;
    while (p < rows && a(p, k) == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(a(r, j), a(p, j));
      sign = -sign;
    }
    res.pivots.push_back(a(r, k));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = k + 1; j < cols; ++j)
        a(i, j) = (a(r, k) * a(i, j) - a(i, k) * a(r, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(r, k);
    ++r;
  }
  res.rank = r;
  if (rows == cols) res.det = (r == rows) ? Rational(sign * prev) : Rational(0);
  return res;
}

Rational determinant(const MatrixQ& M) {
  if (M.rows() != M.cols()) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  if (M.rows() == 0) return 1;
  return bareiss(M).det;
}

double determinant(const MatrixD& M) {
  const std::size_t n = M.rows();
  if (M.cols() != n) throw Error(ErrorKind::InvalidArgument, "determinant of non-square matrix");
  MatrixD a = M;
  double det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

std::size_t rank(const MatrixQ& M) { return bareiss(M).rank; }

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(MatrixQ& a) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t k = 0; k < a.cols() && r < a.rows(); ++k) {
    std::size_t p = r;
    while (p < a.rows() && a(p, k) == 0) ++p;
    if (p == a.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(r, j), a(p, j));
    const Rational inv = 1 / a(r, k);
    for (std::size_t j = k; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, k) == 0) continue;
      const Rational f = a(i, k);
      for (std::size_t j = k; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    piv.push_back(k);
    ++r;
  }
  return piv;
}

}  // namespace

std::vector<std::size_t> independent_cols(const MatrixQ& M) {
  MatrixQ a = M;
  return rref(a);
}

std::vector<std::size_t> independent_rows(const MatrixQ& M) {
  return independent_cols(M.transpose());
}

MatrixQ nullspace(const MatrixQ& M) {
  MatrixQ a = M;
  const auto piv = rref(a);
  std::vector<bool> is_piv(M.cols(), false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t j = 0; j < M.cols(); ++j)
    if (!is_piv[j]) free_cols.push_back(j);
  MatrixQ out(M.cols(), free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    out(free_cols[f], f) = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) out(piv[r], f) = -a(r, free_cols[f]);
  }
  return out;
}

}  // namespace physarum
