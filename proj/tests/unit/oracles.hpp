#pragma once

// Reference computations that share no code path with the library.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "physarum/errors.hpp"
#include "physarum/matrix.hpp"

namespace testing_oracles {

using physarum::MatrixQ;
using physarum::Rational;
using physarum::VecQ;

// Leibniz expansion over all permutations.
inline Rational leibniz_det(const MatrixQ& M) {
  const std::size_t n = M.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term = inversions % 2 ? -1 : 1;
    for (std::size_t i = 0; i < n && term != 0; ++i) term *= M(i, perm[i]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Cramer's rule with Leibniz determinants. Empty when M is singular.
inline std::optional<VecQ> cramer(const MatrixQ& M, const VecQ& rhs) {
  const Rational det = leibniz_det(M);
  if (det == 0) return std::nullopt;
  VecQ x(M.cols());
  for (std::size_t j = 0; j < M.cols(); ++j) {
    MatrixQ Mj = M;
    for (std::size_t i = 0; i < M.rows(); ++i) Mj(i, j) = rhs[i];
    x[j] = leibniz_det(Mj) / det;
  }
  return x;
}

inline void subsets(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<long>(k), true);
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (mask[i]) s.push_back(i);
    fn(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

// Exact KKT system [[R, -Aᵀ], [A, 0]] (q, p) = (0, b) with R = diag(c/x).
// Zero-cost columns just contribute a zero diagonal entry.
inline std::pair<VecQ, VecQ> kkt_min_energy(const MatrixQ& A, const VecQ& b, const VecQ& c, const VecQ& x) {
  const std::size_t n = A.rows(), m = A.cols();
  MatrixQ K(n + m, n + m);
  VecQ rhs(n + m, Rational(0));
  for (std::size_t e = 0; e < m; ++e) {
    K(e, e) = c[e] / x[e];
    for (std::size_t i = 0; i < n; ++i) {
      K(e, m + i) = -A(i, e);
      K(m + i, e) = A(i, e);
    }
  }
  for (std::size_t i = 0; i < n; ++i) rhs[m + i] = b[i];
  // Plain Gauss-Jordan with first nonzero pivot.
  const std::size_t N = n + m;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    while (piv < N && K(piv, col) == 0) ++piv;
    if (piv == N) throw physarum::Error(physarum::ErrorKind::SingularMatrix, "kkt");
    for (std::size_t j = 0; j < N; ++j) std::swap(K(col, j), K(piv, j));
    std::swap(rhs[col], rhs[piv]);
    for (std::size_t i = 0; i < N; ++i) {
      if (i == col || K(i, col) == 0) continue;
      const Rational f = K(i, col) / K(col, col);
      for (std::size_t j = 0; j < N; ++j) K(i, j) -= f * K(col, j);
      rhs[i] -= f * rhs[col];
    }
  }
  VecQ q(m), p(n);
  for (std::size_t e = 0; e < m; ++e) q[e] = rhs[e] / K(e, e);
  for (std::size_t i = 0; i < n; ++i) p[i] = rhs[m + i] / K(m + i, m + i);
  return {q, p};
}

template <class F>
std::optional<physarum::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const physarum::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace testing_oracles
