#include "physarum/oracle.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "physarum/errors.hpp"
#include "physarum/limits.hpp"
#include "physarum/linalg.hpp"

namespace physarum {

std::vector<BasicSolution> OracleReport::optimal_set() const {
  std::vector<BasicSolution> out;
  for (auto i : optimal) out.push_back(all_bfs[i]);
  return out;
}

namespace {

Rational abs_cost(const VecQ& c, const VecQ& f) {
  Rational s = 0;
  for (std::size_t e = 0; e < f.size(); ++e) s += c[e] * abs(f[e]);
  return s;
}

bool is_zero(const VecQ& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

VecQ residual(const LpInstance& inst, const VecQ& f) {
  VecQ r = inst.A * f;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= inst.b[i];
  return r;
}

}  // namespace

std::vector<BasicSolution> basic_solutions(const LpInstance& inst) {
  const std::size_t n = inst.n(), m = inst.m();
  const std::uint64_t count = binomial(m, n), cap = size_cap(kEnumerationCap);
  if (count > cap)
    throw Error(ErrorKind::SizeCap, std::to_string(count) + " bases exceed cap " + std::to_string(cap));

  std::vector<BasicSolution> out;
  std::map<VecQ, std::size_t> seen;
  for_each_combination(m, n, [&](const std::vector<std::size_t>& B) {
    const MatrixQ AB = inst.A.select_cols(B);
    if (determinant(AB) == 0) return true;
    const VecQ fB = solve_linear(AB, inst.b);
    VecQ f(m, Rational(0));
    for (std::size_t k = 0; k < n; ++k) f[B[k]] = fB[k];
    if (seen.count(f)) return true;
    seen.emplace(f, out.size());
    BasicSolution s;
    s.basis = B;
    s.cost = abs_cost(inst.c, f);
    s.feasible_directed = std::all_of(f.begin(), f.end(), [](const Rational& v) { return v >= 0; });
    s.values = std::move(f);
    out.push_back(std::move(s));
    return true;
  });
  return out;
}

OracleReport enumerate_bfs(const LpInstance& inst) { return enumerate_bfs(inst, inst.mode); }

OracleReport enumerate_bfs(const LpInstance& inst, Mode mode) {
  OracleReport rep;
  rep.mode = mode;
  for (auto& s : basic_solutions(inst))
    if (mode == Mode::Undirected || s.feasible_directed) rep.all_bfs.push_back(std::move(s));
  if (rep.all_bfs.empty()) throw Error(ErrorKind::Infeasible, "no feasible basic solution");

  rep.opt = rep.all_bfs.front().cost;
  for (const auto& s : rep.all_bfs) rep.opt = std::min(rep.opt, s.cost);
  for (std::size_t i = 0; i < rep.all_bfs.size(); ++i) {
    auto& s = rep.all_bfs[i];
    s.is_optimal = s.cost == rep.opt;
    if (s.is_optimal) {
      rep.optimal.push_back(i);
    } else {
      rep.non_optimal.push_back(i);
      const Rational gap = s.cost - rep.opt;
      if (!rep.phi || gap < *rep.phi) rep.phi = gap;
    }
  }
  return rep;
}

double dist_to_opt(const OracleReport& report, const VecD& x) {
  double best = std::numeric_limits<double>::infinity();
  for (auto i : report.optimal) {
    const auto& f = report.all_bfs[i].values;
    double d = 0;
    for (std::size_t e = 0; e < x.size(); ++e) d = std::max(d, std::abs(x[e] - std::abs(to_double(f[e]))));
    best = std::min(best, d);
  }
  return best;
}

Rational dist_to_opt_exact(const OracleReport& report, const VecQ& x) {
  std::optional<Rational> best;
  for (auto i : report.optimal) {
    const auto& f = report.all_bfs[i].values;
    Rational d = 0;
    for (std::size_t e = 0; e < x.size(); ++e) d = std::max<Rational>(d, abs(x[e] - abs(f[e])));
    if (!best || d < *best) best = d;
  }
  return best.value_or(Rational(0));
}

std::string report_to_json(const OracleReport& report, int indent) {
  using json = nlohmann::ordered_json;
  auto vec = [](const VecQ& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(to_fraction(x));
    return a;
  };
  json j;
  j["mode"] = to_string(report.mode);
  j["opt"] = to_fraction(report.opt);
  j["phi"] = report.phi ? json(to_fraction(*report.phi)) : json(nullptr);
  j["bfs_count"] = report.all_bfs.size();
  json opt = json::array();
  for (auto i : report.optimal) {
    const auto& s = report.all_bfs[i];
    opt.push_back({{"basis", s.basis}, {"values", vec(s.values)}, {"cost", to_fraction(s.cost)}});
  }
  j["optimal"] = opt;
  json non = json::array();
  for (auto i : report.non_optimal) {
    const auto& s = report.all_bfs[i];
    non.push_back({{"basis", s.basis}, {"values", vec(s.values)}, {"cost", to_fraction(s.cost)}});
  }
  j["non_optimal"] = non;
  return j.dump(indent) + "\n";
}

bool sign_compatible(const VecQ& v, const VecQ& f) {
  for (std::size_t e = 0; e < v.size(); ++e) {
    if (v[e] == 0) continue;
    if (sgn(v[e]) != sgn(f[e])) return false;
  }
  return true;
}

Decomposition decompose(const LpInstance& inst, const VecQ& f) {
  return decompose(inst, f, basic_solutions(inst));
}

Decomposition decompose(const LpInstance& inst, const VecQ& f, const std::vector<BasicSolution>& pool) {
  if (f.size() != inst.m() || !is_zero(residual(inst, f)))
    throw Error(ErrorKind::PreconditionViolated, "decompose needs A f = b");
  Decomposition out;
  VecQ r = f;
  Rational total = 0;
  for (std::size_t round = 0; round <= inst.m() + 1 && total < 1; ++round) {
    const VecQ* best = nullptr;
    Rational best_lambda = 0;
    for (const auto& s : pool) {
      if (!sign_compatible(s.values, r)) continue;
      std::optional<Rational> lam;
      for (std::size_t e = 0; e < r.size(); ++e) {
        if (s.values[e] == 0) continue;
        Rational ratio = r[e] / s.values[e];
        if (!lam || ratio < *lam) lam = ratio;
      }
      if (!lam) continue;
      Rational l = std::min(*lam, Rational(1 - total));
      if (l > best_lambda) {
        best_lambda = l;
        best = &s.values;
      }
    }
    if (!best) break;
    for (std::size_t e = 0; e < r.size(); ++e) r[e] -= best_lambda * (*best)[e];
    total += best_lambda;
    out.lambda.push_back(best_lambda);
    out.vertices.push_back(*best);
  }
  if (total != 1) throw Error(ErrorKind::DecompositionFailure, "basic solutions do not cover f");
  if (!is_zero(inst.A * r)) throw Error(ErrorKind::DecompositionFailure, "remainder is not in the kernel");
  out.kernel = std::move(r);
  return out;
}

std::vector<VecQ> circuits(const MatrixQ& A) {
  const std::size_t n = A.rows(), m = A.cols();
  std::vector<VecQ> out;
  for (std::size_t s = 1; s <= std::min(m, n + 1); ++s) {
    for_each_combination(m, s, [&](const std::vector<std::size_t>& C) {
      const MatrixQ K = nullspace(A.select_cols(C));
      if (K.cols() != 1) return true;
      VecQ v(m, Rational(0));
      for (std::size_t k = 0; k < s; ++k) {
        if (K(k, 0) == 0) return true;
        v[C[k]] = K(k, 0);
      }
      const Rational lead = v[C[0]];
      for (auto& x : v) x /= lead;
      out.push_back(std::move(v));
      return true;
    });
  }
  return out;
}

std::vector<std::pair<Rational, VecQ>> conformal_circuits(const MatrixQ& A, const VecQ& w) {
  std::vector<std::pair<Rational, VecQ>> out;
  if (is_zero(w)) return out;
  const auto circ = circuits(A);
  VecQ r = w;
  for (std::size_t round = 0; round <= w.size() && !is_zero(r); ++round) {
    std::optional<VecQ> best;
    Rational best_mu = 0;
    for (const auto& k0 : circ) {
      for (int sign : {1, -1}) {
        VecQ k = k0;
        if (sign < 0)
          for (auto& x : k) x = -x;
        if (!sign_compatible(k, r)) continue;
        std::optional<Rational> mu;
        for (std::size_t e = 0; e < r.size(); ++e) {
          if (k[e] == 0) continue;
          Rational ratio = r[e] / k[e];
          if (!mu || ratio < *mu) mu = ratio;
        }
        if (mu && *mu > best_mu) {
          best_mu = *mu;
          best = std::move(k);
        }
      }
    }
    if (!best) break;
    for (std::size_t e = 0; e < r.size(); ++e) r[e] -= best_mu * (*best)[e];
    out.emplace_back(best_mu, std::move(*best));
  }
  if (!is_zero(r)) throw Error(ErrorKind::DecompositionFailure, "kernel vector has no conformal circuit decomposition");
  return out;
}

VecQ round_to_kernel_free(const LpInstance& inst, const VecQ& g, std::vector<std::size_t> S,
                          const std::optional<VecQ>& p) {
  const std::size_t m = inst.m();
  if (g.size() != m || !is_zero(residual(inst, g)))
    throw Error(ErrorKind::PreconditionViolated, "rounding needs A g = b");
  std::vector<bool> inS(m, false);
  for (auto e : S) {
    if (e >= m) throw Error(ErrorKind::InvalidArgument, "index set S out of range");
    inS[e] = true;
  }
  if (p) {
    const VecQ atp = transpose_times(inst.A, *p);
    for (std::size_t e = 0; e < m; ++e)
      if (g[e] <= 0 || atp[e] <= 0) inS[e] = true;
  }
  const InstanceConstants k = compute_constants(inst, VecQ(m, Rational(1)));
  Rational mass = 0;
  for (std::size_t e = 0; e < m; ++e)
    if (inS[e]) mass += abs(g[e]);
  if (mass >= 1 / k.rho_A)
    throw Error(ErrorKind::PreconditionViolated, "Σ_S |g_e| = " + to_fraction(mass) + " is not below 1/ρ_A = " + to_fraction(1 / k.rho_A));

  auto valid = [&](const VecQ& f) {
    for (std::size_t e = 0; e < m; ++e) {
      if (inS[e] && f[e] != 0) return false;
      if (f[e] != 0 && sgn(f[e]) != sgn(g[e])) return false;
    }
    return is_zero(residual(inst, f));
  };
  std::optional<VecQ> best;
  Rational best_dist = 0;
  auto offer = [&](const VecQ& f) {
    if (!valid(f)) return;
    Rational d = 0;
    for (std::size_t e = 0; e < m; ++e) d = std::max<Rational>(d, abs(f[e] - g[e]));
    if (!best || d < best_dist) {
      best = f;
      best_dist = d;
    }
  };

  const auto pool = basic_solutions(inst);
  // Keep only the terms of a sign-compatible decomposition that avoid S.
  {
    const Decomposition dec = decompose(inst, g, pool);
    const auto circ = conformal_circuits(inst.A, dec.kernel);
    auto avoids_S = [&](const VecQ& v) {
      for (std::size_t e = 0; e < m; ++e)
        if (inS[e] && v[e] != 0) return false;
      return true;
    };
    Rational beta = 0;
    VecQ f(m, Rational(0));
    for (std::size_t i = 0; i < dec.vertices.size(); ++i)
      if (avoids_S(dec.vertices[i])) {
        beta += dec.lambda[i];
        for (std::size_t e = 0; e < m; ++e) f[e] += dec.lambda[i] * dec.vertices[i][e];
      }
    if (beta > 0) {
      for (auto& v : f) v /= beta;
      for (const auto& [mu, kv] : circ)
        if (avoids_S(kv))
          for (std::size_t e = 0; e < m; ++e) f[e] += mu * kv[e];
      offer(f);
    }
  }
  for (const auto& s : pool) offer(s.values);
  // g shifted on the complement of S by the exact correction A_B d = A_S g_S.
  {
    std::vector<std::size_t> comp, sidx;
    for (std::size_t e = 0; e < m; ++e) (inS[e] ? sidx : comp).push_back(e);
    VecQ target(inst.n(), Rational(0));
    for (auto e : sidx)
      for (std::size_t i = 0; i < inst.n(); ++i) target[i] += inst.A(i, e) * g[e];
    const MatrixQ Ac = inst.A.select_cols(comp);
    const auto B = independent_cols(Ac);
    const MatrixQ AB = Ac.select_cols(B);
    const auto rows = independent_rows(AB);
    const MatrixQ sq = AB.select_rows(rows);
    VecQ rhs;
    for (auto i : rows) rhs.push_back(target[i]);
    if (!B.empty()) {
      const VecQ d = solve_linear(sq, rhs);
      VecQ f(m, Rational(0));
      for (auto e : comp) f[e] = g[e];
      for (std::size_t k2 = 0; k2 < B.size(); ++k2) f[comp[B[k2]]] += d[k2];
      offer(f);
    }
  }
  if (!best) throw Error(ErrorKind::DecompositionFailure, "no sign-compatible feasible point vanishes on S");
  return *best;
}

OptimalityCheck check_optimality_criterion(const LpInstance& inst, const OracleReport& report, const VecQ& f,
                                           const Rational& eps) {
  OptimalityCheck out;
  const DeterminantInfo& info = require_det_info(inst);
  const Rational gamma(info.gamma_A);
  const Rational m = static_cast<unsigned long>(inst.m());
  out.threshold = eps / (2 * m * info.D * info.D * info.D * gamma * norm_1(inst.b));
  out.bound = eps / (info.D * gamma);

  out.hypothesis = true;
  for (auto i : report.non_optimal) {
    const auto& g = report.all_bfs[i].values;
    bool found = false;
    for (std::size_t e = 0; e < g.size() && !found; ++e) found = g[e] > 0 && f[e] < out.threshold;
    if (!found) {
      out.hypothesis = false;
      break;
    }
  }

  std::vector<BasicSolution> pool;
  for (const auto& s : report.all_bfs) pool.push_back(s);
  const Decomposition dec = decompose(inst, f, pool);
  out.kernel_free = is_zero(dec.kernel);

  VecQ fstar(inst.m(), Rational(0));
  Rational moved = 0;
  const VecQ* anchor = nullptr;
  for (std::size_t i = 0; i < dec.vertices.size(); ++i) {
    const bool opt = abs_cost(inst.c, dec.vertices[i]) == report.opt;
    if (opt) {
      if (!anchor) anchor = &dec.vertices[i];
      for (std::size_t e = 0; e < fstar.size(); ++e) fstar[e] += dec.lambda[i] * dec.vertices[i][e];
    } else {
      moved += dec.lambda[i];
    }
  }
  if (!anchor) anchor = &report.all_bfs[report.optimal.front()].values;
  for (std::size_t e = 0; e < fstar.size(); ++e) fstar[e] += moved * (*anchor)[e];
  out.distance = 0;
  for (std::size_t e = 0; e < fstar.size(); ++e) out.distance = std::max<Rational>(out.distance, abs(f[e] - fstar[e]));
  out.nearest_optimal = std::move(fstar);
  out.conclusion = out.distance < out.bound;
  return out;
}

}  // namespace physarum
