#include "physarum/lp_model.hpp"

#include <algorithm>

#include "physarum/errors.hpp"
#include "physarum/limits.hpp"
#include "physarum/linalg.hpp"

namespace physarum {

std::string to_string(Mode mode) { return mode == Mode::Directed ? "directed" : "undirected"; }

Mode parse_mode(const std::string& text) {
  if (text == "directed") return Mode::Directed;
  if (text == "undirected") return Mode::Undirected;
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + text + "'");
}

namespace {

void require_integer(const Rational& v, const char* what) {
  if (!is_integer(v)) throw Error(ErrorKind::NonIntegerData, std::string(what) + " has non-integer entry " + to_fraction(v));
}

}  // namespace

LpInstance validate(LpInstance inst) {
  const std::size_t n = inst.A.rows(), m = inst.A.cols();
  if (inst.b.size() != n) throw Error(ErrorKind::InvalidArgument, "b has length " + std::to_string(inst.b.size()) + ", expected " + std::to_string(n));
  if (inst.c.size() != m) throw Error(ErrorKind::InvalidArgument, "c has length " + std::to_string(inst.c.size()) + ", expected " + std::to_string(m));
  for (const auto& v : inst.A.data()) require_integer(v, "A");
  for (const auto& v : inst.b) require_integer(v, "b");
  for (const auto& v : inst.c) require_integer(v, "c");
  if (inst.x0) {
    if (inst.x0->size() != m) throw Error(ErrorKind::InvalidArgument, "x0 has wrong length");
    for (const auto& v : *inst.x0)
      if (v <= 0) throw Error(ErrorKind::NonPositiveCapacity, "x0 must be positive");
  }
  for (const auto& v : inst.c)
    if (v < 0) throw Error(ErrorKind::NegativeCost, "cost entry " + to_fraction(v) + " is negative");

  const auto keep = independent_rows(inst.A);
  if (keep.size() < n) {
    MatrixQ Ab(n, m + 1);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) Ab(i, j) = inst.A(i, j);
      Ab(i, m) = inst.b[i];
    }
    if (rank(Ab) != keep.size()) throw Error(ErrorKind::Infeasible, "dependent rows of A carry inconsistent demands");
    std::vector<bool> kept(n, false);
    for (auto i : keep) kept[i] = true;
    for (std::size_t i = 0; i < n; ++i)
      if (!kept[i]) inst.dropped_rows.push_back(i);
    inst.A = inst.A.select_rows(keep);
    VecQ b;
    for (auto i : keep) b.push_back(inst.b[i]);
    inst.b = std::move(b);
  }

  if (inst.m() < inst.n()) throw Error(ErrorKind::InfeasibleShape, "m < n after row reduction");

  std::vector<std::size_t> zero;
  for (std::size_t e = 0; e < m; ++e)
    if (inst.c[e] == 0) zero.push_back(e);
  if (!zero.empty() && rank(inst.A.select_cols(zero)) != zero.size())
    throw Error(ErrorKind::KernelCostViolation, "zero-cost columns are linearly dependent");

  if (std::all_of(inst.b.begin(), inst.b.end(), [](const Rational& v) { return v == 0; }))
    throw Error(ErrorKind::ZeroDemand, "b = 0");

  try {
    inst.det_info = std::make_shared<const DeterminantInfo>(determinant_info(inst.A));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeCap) throw;
    inst.det_info.reset();
  }
  return inst;
}

DeterminantInfo determinant_info(const MatrixQ& A) {
  const std::size_t n = A.rows(), m = A.cols();
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= n; ++k) total = saturating_add(total, saturating_mul(binomial(n, k), binomial(m, k)));
  const std::uint64_t cap = size_cap(kDeterminantCap);
  if (total > cap)
    throw Error(ErrorKind::SizeCap, std::to_string(total) + " determinant evaluations exceed cap " + std::to_string(cap));

  DeterminantInfo info;
  info.evaluations = total;
  Integer g = 0;
  for (const auto& v : A.data())
    if (v != 0) g = gcd(g, v.get_num());
  if (g == 0) throw Error(ErrorKind::InvalidArgument, "A has no nonzero entry");
  info.gamma_A = g;

  info.D_S = 0;
  Rational max_dim_nm1 = (n == 1) ? Rational(1) : Rational(0);
  Rational max_dim_n = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    Rational best = 0;
    for_each_combination(n, k, [&](const std::vector<std::size_t>& rows) {
      for_each_combination(m, k, [&](const std::vector<std::size_t>& cols) {
        Rational d = abs(determinant(A.submatrix(rows, cols)));
        if (d > best) best = d;
        return true;
      });
      return true;
    });
    info.D_S = std::max(info.D_S, best);
    Rational gk;
    mpz_pow_ui(gk.get_num_mpz_t(), g.get_mpz_t(), k);
    gk.canonicalize();
    if (k + 1 == n) max_dim_nm1 = best / gk;
    if (k == n) max_dim_n = best / gk;
  }
  info.D = std::max(max_dim_nm1, max_dim_n);
  return info;
}

const DeterminantInfo& require_det_info(const LpInstance& inst) {
  if (!inst.det_info) throw Error(ErrorKind::SizeCap, "determinant data unavailable for this instance size");
  return *inst.det_info;
}

Rational min_positive_cost(const VecQ& c) {
  Rational best = 0;
  for (const auto& v : c)
    if (v > 0 && (best == 0 || v < best)) best = v;
  return best;
}

InstanceConstants compute_constants(const LpInstance& inst, const VecQ& x0) {
  if (x0.size() != inst.m()) throw Error(ErrorKind::InvalidArgument, "x0 has wrong length");
  for (const auto& v : x0)
    if (v <= 0) throw Error(ErrorKind::NonPositiveCapacity, "x0 must be positive");
  const DeterminantInfo info = inst.det_info ? *inst.det_info : determinant_info(inst.A);

  InstanceConstants k;
  const Rational n = static_cast<unsigned long>(inst.n());
  const Rational m = static_cast<unsigned long>(inst.m());
  k.gamma_A = info.gamma_A;
  k.D = info.D;
  k.D_S = info.D_S;
  const Rational gamma(info.gamma_A);
  k.b_l1 = norm_1(inst.b);
  k.b_over_gamma_l1 = k.b_l1 / gamma;
  k.c_l1 = norm_1(inst.c);
  if (k.c_l1 == 0) throw Error(ErrorKind::InvalidArgument, "constants need at least one positive cost");
  k.c_min = min_positive_cost(inst.c);
  k.c_max = 0;
  for (const auto& v : inst.c) k.c_max = std::max(k.c_max, v);
  k.A_max = 0;
  k.A_sum = 0;
  for (const auto& v : inst.A.data()) {
    k.A_max = std::max(k.A_max, abs(v));
    k.A_sum += abs(v);
  }
  const Rational& D = k.D;
  const Rational D2 = D * D, D3 = D2 * D, D5 = D3 * D2;

  k.h0 = k.c_min / (4 * D * k.c_l1);
  k.Psi0 = std::max(Rational(m * D2 * k.b_over_gamma_l1), norm_inf(x0));
  k.C1 = D * k.b_over_gamma_l1 * k.c_l1;
  k.C2 = 64 * m * m * n * D5 * gamma * gamma * k.A_max * k.b_l1;
  k.C3 = D3 * gamma * k.b_l1 * k.c_l1;
  k.rho_A = std::max(Rational(D * gamma), Rational(n * D2 * k.A_max));
  return k;
}

}  // namespace physarum
