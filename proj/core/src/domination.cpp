#include "physarum/domination.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "physarum/errors.hpp"
#include "physarum/limits.hpp"
#include "physarum/linalg.hpp"

namespace physarum {

DualVertexSet enumerate_dual_vertices(const LpInstance& inst, Mode mode) {
  const std::size_t n = inst.n(), m = inst.m();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "instance has no rows");
  const std::uint64_t count = binomial(m, n - 1), cap = size_cap(kEnumerationCap);
  if (count > cap) throw Error(ErrorKind::SizeCap, std::to_string(count) + " dual bases exceed cap " + std::to_string(cap));

  DualVertexSet Y;
  Y.mode = mode;
  std::set<VecQ> seen;
  VecQ rhs(n, Rational(0));
  rhs[0] = mode == Mode::Directed ? 1 : -1;
  for_each_combination(m, n - 1, [&](const std::vector<std::size_t>& S) {
    MatrixQ K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      K(0, i) = inst.b[i];
      for (std::size_t k = 0; k < S.size(); ++k) K(k + 1, i) = inst.A(i, S[k]);
    }
    if (determinant(K) == 0) return true;
    VecQ y = solve_linear(K, rhs);
    if (!seen.insert(y).second) return true;
    DualVertex v;
    v.Aty = transpose_times(inst.A, y);
    v.d.resize(m);
    for (std::size_t e = 0; e < m; ++e)
      v.d[e] = mode == Mode::Directed ? std::max(Rational(0), v.Aty[e]) : abs(v.Aty[e]);
    v.y = std::move(y);
    Y.vertices.push_back(std::move(v));
    return true;
  });
  return Y;
}

bool is_dual_vertex(const LpInstance& inst, const DualVertex& v, Mode mode) {
  const std::size_t n = inst.n(), m = inst.m();
  const VecQ Aty = transpose_times(inst.A, v.y);
  if (dot(inst.b, v.y) != (mode == Mode::Directed ? 1 : -1)) return false;
  // Rows over the variables (y, z).
  std::vector<VecQ> tight;
  VecQ eq(n + m, Rational(0));
  for (std::size_t i = 0; i < n; ++i) eq[i] = inst.b[i];
  tight.push_back(eq);
  for (std::size_t e = 0; e < m; ++e) {
    const Rational lo = mode == Mode::Directed ? Rational(0) : Rational(-Aty[e]);
    if (v.d[e] < Aty[e] || v.d[e] < lo) return false;
    if (v.d[e] == Aty[e]) {  // z_e - A_eᵀy ≥ 0
      VecQ r(n + m, Rational(0));
      for (std::size_t i = 0; i < n; ++i) r[i] = -inst.A(i, e);
      r[n + e] = 1;
      tight.push_back(r);
    }
    if (v.d[e] == lo) {  // z_e ≥ 0, or z_e + A_eᵀy ≥ 0
      VecQ r(n + m, Rational(0));
      if (mode == Mode::Undirected)
        for (std::size_t i = 0; i < n; ++i) r[i] = inst.A(i, e);
      r[n + e] = 1;
      tight.push_back(r);
    }
  }
  MatrixQ T(tight.size(), n + m);
  for (std::size_t i = 0; i < tight.size(); ++i)
    for (std::size_t j = 0; j < n + m; ++j) T(i, j) = tight[i][j];
  return rank(T) == n + m;
}

CapacityFlow max_capacity_flow(const LpInstance& inst, const VecQ& x, Mode mode) {
  const std::size_t n = inst.n(), m = inst.m();
  if (x.size() != m) throw Error(ErrorKind::InvalidArgument, "x has wrong length");
  const std::size_t free_bounds = m - (n - 1);
  if (free_bounds >= 63) throw Error(ErrorKind::SizeCap, "too many columns for primal enumeration");
  const std::uint64_t count = saturating_mul(binomial(m, n - 1), std::uint64_t(1) << free_bounds);
  const std::uint64_t cap = size_cap(kEnumerationCap);
  if (count > cap) throw Error(ErrorKind::SizeCap, std::to_string(count) + " primal vertices exceed cap " + std::to_string(cap));

  CapacityFlow best{Rational(0), VecQ(m, Rational(0))};
  for_each_combination(m, n - 1, [&](const std::vector<std::size_t>& F) {
    MatrixQ K(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < F.size(); ++k) K(i, k) = inst.A(i, F[k]);
      K(i, n - 1) = -inst.b[i];
    }
    if (determinant(K) == 0) return true;
    const MatrixQ Kinv = inverse(K);
    std::vector<std::size_t> rest;
    std::vector<bool> inF(m, false);
    for (auto e : F) inF[e] = true;
    for (std::size_t e = 0; e < m; ++e)
      if (!inF[e]) rest.push_back(e);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << rest.size()); ++mask) {
      VecQ f(m, Rational(0));
      VecQ rhs(n, Rational(0));
      for (std::size_t k = 0; k < rest.size(); ++k) {
        const std::size_t e = rest[k];
        const bool upper = (mask >> k) & 1;
        f[e] = upper ? x[e] : (mode == Mode::Directed ? Rational(0) : Rational(-x[e]));
        if (f[e] != 0)
          for (std::size_t i = 0; i < n; ++i) rhs[i] -= inst.A(i, e) * f[e];
      }
      const VecQ sol = Kinv * rhs;
      bool ok = true;
      for (std::size_t k = 0; k < F.size() && ok; ++k) {
        const Rational& v = sol[k];
        const Rational lo = mode == Mode::Directed ? Rational(0) : Rational(-x[F[k]]);
        ok = v >= lo && v <= x[F[k]];
      }
      if (!ok) continue;
      const Rational& t = sol[n - 1];
      if (t > best.t) {
        for (std::size_t k = 0; k < F.size(); ++k) f[F[k]] = sol[k];
        best.t = t;
        best.f = std::move(f);
      }
    }
    return true;
  });
  return best;
}

DominationCertificate alpha_of(const LpInstance& inst, const DualVertexSet& Y, const VecQ& x) {
  if (Y.vertices.empty()) throw Error(ErrorKind::InvalidArgument, "empty dual vertex set");
  for (const auto& v : x)
    if (v <= 0) throw Error(ErrorKind::NonPositiveCapacity, "x must be positive");
  DominationCertificate cert;
  for (std::size_t i = 0; i < Y.vertices.size(); ++i) {
    const auto& v = Y.vertices[i];
    const Rational val = dot(Y.mode == Mode::Directed ? v.Aty : v.d, x);
    if (i == 0 || val < cert.alpha) {
      cert.alpha = val;
      cert.argmin = i;
    }
  }
  cert.y = Y.vertices[cert.argmin].y;
  if (cert.alpha > 0) {
    const CapacityFlow flow = max_capacity_flow(inst, x, Y.mode);
    if (flow.t >= cert.alpha) {
      const Rational scale = cert.alpha / flow.t;
      cert.witness = flow.f;
      for (auto& v : cert.witness) v *= scale;
    }
  }
  return cert;
}

double alpha_value(const DualVertexSet& Y, const VecD& x) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : Y.vertices) {
    const VecQ& w = Y.mode == Mode::Directed ? v.Aty : v.d;
    double s = 0;
    for (std::size_t e = 0; e < x.size(); ++e)
      if (w[e] != 0) s += to_double(w[e]) * x[e];
    best = std::min(best, s);
  }
  return best;
}

Preconditioned precondition(const LpInstance& inst, const VecQ& x0) {
  const InstanceConstants k = compute_constants(inst, x0);
  const std::size_t n = inst.n(), m = inst.m();
  Preconditioned out;
  out.c_prime = 2 * k.C1;
  out.z0 = 1 + k.D_S * norm_inf(x0) * k.A_sum * k.b_l1;
  LpInstance ext;
  ext.mode = inst.mode;
  ext.A = MatrixQ(n, m + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < m; ++e) ext.A(i, e) = inst.A(i, e);
    ext.A(i, m) = inst.b[i];
  }
  ext.b = inst.b;
  ext.c = inst.c;
  ext.c.push_back(out.c_prime);
  out.x0 = x0;
  out.x0.push_back(out.z0);
  ext.x0 = out.x0;
  out.extended = validate(std::move(ext));
  return out;
}

}  // namespace physarum
