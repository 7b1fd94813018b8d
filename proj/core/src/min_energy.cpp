#include "physarum/min_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "physarum/errors.hpp"
#include "physarum/linalg.hpp"

namespace physarum {

ZeroCostBlocks zero_cost_blocks(const LpInstance& inst) {
  ZeroCostBlocks blk;
  const std::size_t n = inst.n(), m = inst.m();
  for (std::size_t e = 0; e < m; ++e) (inst.c[e] == 0 ? blk.Z : blk.P).push_back(e);
  if (blk.Z.empty()) {
    for (std::size_t i = 0; i < n; ++i) blk.row_perm.push_back(i);
    return blk;
  }
  const MatrixQ AZ = inst.A.select_cols(blk.Z);
  const auto top = independent_rows(AZ);
  if (top.size() != blk.Z.size())
    throw Error(ErrorKind::KernelCostViolation, "A'_Z cannot be formed: zero-cost columns are dependent");
  std::vector<bool> used(n, false);
  for (auto i : top) used[i] = true;
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!used[i]) rest.push_back(i);
  blk.row_perm = top;
  blk.row_perm.insert(blk.row_perm.end(), rest.begin(), rest.end());

  const MatrixQ AP = inst.A.select_cols(blk.P);
  blk.AZ1 = AZ.select_rows(top);
  blk.AZ2 = AZ.select_rows(rest);
  blk.AP1 = AP.select_rows(top);
  blk.AP2 = AP.select_rows(rest);
  blk.AZ1_inv = inverse(blk.AZ1);
  for (auto i : top) blk.b1.push_back(inst.b[i]);
  for (auto i : rest) blk.b2.push_back(inst.b[i]);
  const MatrixQ T = blk.AZ2 * blk.AZ1_inv;
  blk.M = blk.AP2 - T * blk.AP1;
  blk.rhs = blk.b2;
  const VecQ tb = T * blk.b1;
  for (std::size_t i = 0; i < blk.rhs.size(); ++i) blk.rhs[i] -= tb[i];
  return blk;
}

namespace {

template <class T>
struct Kernel {
  const Matrix<T>& A;
  const Vec<T>& b;
  const Vec<T>& c;
  const ZeroCostBlocks& blk;
  const Matrix<T>& AP1;
  const Matrix<T>& AZ1_inv;
  const Matrix<T>& G;
  const Matrix<T>& M;
  const Vec<T>& b1;
  const Vec<T>& rhs;
};

template <class T>
Vec<T> laplacian_solve(const Matrix<T>& B, const Vec<T>& w, const Vec<T>& rhs) {
  const std::size_t r = B.rows(), k = B.cols();
  Matrix<T> L(r, r);
  for (std::size_t e = 0; e < k; ++e) {
    if (w[e] == T(0)) continue;
    for (std::size_t i = 0; i < r; ++i) {
      const T bi = B(i, e) * w[e];
      if (bi == T(0)) continue;
      for (std::size_t j = 0; j < r; ++j) L(i, j) += bi * B(j, e);
    }
  }
  try {
    if constexpr (std::is_same_v<T, double>) {
      // Symmetric diagonal scaling; conductances can differ by many orders of magnitude.
      Vec<T> d(r, 1.0);
      for (std::size_t i = 0; i < r; ++i)
        if (L(i, i) > 0) d[i] = 1 / std::sqrt(L(i, i));
      Vec<T> srhs(r);
      for (std::size_t i = 0; i < r; ++i) {
        srhs[i] = rhs[i] * d[i];
        for (std::size_t j = 0; j < r; ++j) L(i, j) *= d[i] * d[j];
      }
      Vec<T> y = solve_linear(L, srhs);
      for (std::size_t i = 0; i < r; ++i) y[i] *= d[i];
      return y;
    } else {
      return solve_linear(L, rhs);
    }
  } catch (const Error& err) {
    if (err.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularLaplacian, err.what());
    throw;
  }
}

template <class T>
void run_kernel(const Kernel<T>& k, const Vec<T>& x, Vec<T>& q, Vec<T>& p, T& energy) {
  const std::size_t n = k.A.rows(), m = k.A.cols();
  q.assign(m, T(0));
  p.assign(n, T(0));
  if (k.blk.Z.empty()) {
    Vec<T> w(m);
    for (std::size_t e = 0; e < m; ++e) w[e] = x[e] / k.c[e];
    p = laplacian_solve(k.A, w, k.b);
    const Vec<T> atp = transpose_times(k.A, p);
    for (std::size_t e = 0; e < m; ++e) q[e] = w[e] * atp[e];
  } else {
    const auto& Z = k.blk.Z;
    const auto& P = k.blk.P;
    const std::size_t z = Z.size(), r = n - z;
    Vec<T> p1(z, T(0)), p2;
    if (r > 0) {
      Vec<T> w(P.size());
      for (std::size_t j = 0; j < P.size(); ++j) w[j] = x[P[j]] / k.c[P[j]];
      p2 = laplacian_solve(k.M, w, k.rhs);
      p1 = k.G * p2;
    }
    for (std::size_t i = 0; i < n; ++i) p[k.blk.row_perm[i]] = i < z ? p1[i] : p2[i - z];
    const Vec<T> atp = transpose_times(k.A, p);
    Vec<T> qP(P.size());
    for (std::size_t j = 0; j < P.size(); ++j) {
      qP[j] = (x[P[j]] / k.c[P[j]]) * atp[P[j]];
      q[P[j]] = qP[j];
    }
    Vec<T> t = k.b1;
    const Vec<T> ap = k.AP1 * qP;
    for (std::size_t i = 0; i < z; ++i) t[i] -= ap[i];
    const Vec<T> qZ = k.AZ1_inv * t;
    for (std::size_t j = 0; j < z; ++j) q[Z[j]] = qZ[j];
  }
  energy = dot(k.b, p);
}

MatrixQ g_matrix(const ZeroCostBlocks& blk) {
  if (blk.Z.empty()) return {};
  MatrixQ G = blk.AZ1_inv.transpose() * blk.AZ2.transpose();
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j = 0; j < G.cols(); ++j) G(i, j) = -G(i, j);
  return G;
}

}  // namespace

MinEnergySolver::MinEnergySolver(const LpInstance& inst) : inst_(inst), blocks_(zero_cost_blocks(inst)) {
  A_ = to_double(inst_.A);
  b_ = to_double(inst_.b);
  c_ = to_double(inst_.c);
  if (!blocks_.Z.empty()) {
    AP1_ = to_double(blocks_.AP1);
    AZ1_inv_ = to_double(blocks_.AZ1_inv);
    G_ = to_double(g_matrix(blocks_));
    M_ = to_double(blocks_.M);
    b1_ = to_double(blocks_.b1);
    rhs_ = to_double(blocks_.rhs);
  }
}

MinEnergySolution MinEnergySolver::solve(const VecD& x_in) const {
  if (x_in.size() != inst_.m()) throw Error(ErrorKind::InvalidArgument, "x has wrong length");
  MinEnergySolution sol;
  VecD x = x_in;
  for (auto& v : x) {
    if (!(v > 0)) throw Error(ErrorKind::NonPositiveCapacity, "x must be positive");
    if (v < kMinCapacity) {
      v = kMinCapacity;
      sol.clamped = true;
    }
  }
  Kernel<double> k{A_, b_, c_, blocks_, AP1_, AZ1_inv_, G_, M_, b1_, rhs_};
  run_kernel(k, x, sol.q, sol.p, sol.energy);
  return sol;
}

MinEnergySolution solve_positive(const LpInstance& inst, const VecD& x) {
  for (const auto& v : inst.c)
    if (v <= 0) throw Error(ErrorKind::PreconditionViolated, "solve_positive needs c > 0");
  return MinEnergySolver(inst).solve(x);
}

MinEnergySolution solve_general(const LpInstance& inst, const VecD& x) { return MinEnergySolver(inst).solve(x); }

ExactMinEnergySolution solve_general_exact(const LpInstance& inst, const VecQ& x) {
  if (x.size() != inst.m()) throw Error(ErrorKind::InvalidArgument, "x has wrong length");
  for (const auto& v : x)
    if (v <= 0) throw Error(ErrorKind::NonPositiveCapacity, "x must be positive");
  const ZeroCostBlocks blk = zero_cost_blocks(inst);
  const MatrixQ G = g_matrix(blk);
  Kernel<Rational> k{inst.A, inst.b, inst.c, blk, blk.AP1, blk.AZ1_inv, G, blk.M, blk.b1, blk.rhs};
  ExactMinEnergySolution sol;
  run_kernel(k, x, sol.q, sol.p, sol.energy);
  return sol;
}

double energy(const LpInstance& inst, const VecD& x, const VecD& f) {
  double s = 0;
  for (std::size_t e = 0; e < inst.m(); ++e) {
    if (f[e] == 0.0) continue;
    if (x[e] <= 0.0) return std::numeric_limits<double>::infinity();
    s += to_double(inst.c[e]) / x[e] * f[e] * f[e];
  }
  return s;
}

Rational energy_exact(const LpInstance& inst, const VecQ& x, const VecQ& f) {
  Rational s = 0;
  for (std::size_t e = 0; e < inst.m(); ++e) {
    if (f[e] == 0) continue;
    if (x[e] <= 0) throw Error(ErrorKind::InvalidArgument, "energy is infinite: f_e != 0 where x_e = 0");
    s += inst.c[e] / x[e] * f[e] * f[e];
  }
  return s;
}

}  // namespace physarum
