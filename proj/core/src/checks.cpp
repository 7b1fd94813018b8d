#include "physarum/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "physarum/domination.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/errors.hpp"
#include "physarum/instances.hpp"
#include "physarum/limits.hpp"
#include "physarum/linalg.hpp"
#include "physarum/min_energy.hpp"

namespace physarum {

namespace {

CheckResult pass(std::string name, std::string detail = {}) { return {std::move(name), true, false, std::move(detail)}; }
CheckResult fail(std::string name, std::string detail) { return {std::move(name), false, false, std::move(detail)}; }
CheckResult skip(std::string name, std::string detail) { return {std::move(name), true, true, std::move(detail)}; }

CheckResult guarded(const std::string& name, const std::function<CheckResult()>& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SizeCap) return skip(name, e.what());
    return fail(name, e.what());
  } catch (const std::exception& e) {
    return fail(name, e.what());
  }
}

VecD random_positive(std::mt19937_64& rng, std::size_t m, double lo = 0.1, double hi = 2.0) {
  VecD x(m);
  for (auto& v : x) v = uniform_real(rng, lo, hi);
  return x;
}

std::string fmt(double v) { return format_number(v); }

}  // namespace

VecQ dominating_start(const LpInstance& inst, const OracleReport& report) {
  const std::size_t m = inst.m();
  VecQ avg(m, Rational(0));
  std::size_t count = 0;
  for (const auto& s : report.all_bfs) {
    if (!s.feasible_directed) continue;
    for (std::size_t e = 0; e < m; ++e) avg[e] += s.values[e];
    ++count;
  }
  if (count == 0) throw Error(ErrorKind::Infeasible, "no feasible basic solution");
  for (auto& v : avg) v /= static_cast<unsigned long>(count);
  const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
  Rational s = 0;
  for (const auto& v : Y.vertices) {
    Rational row = 0;
    for (const auto& a : v.Aty) row += a;
    s = std::max(s, abs(row));
  }
  const Rational delta = Rational(1) / (2 * (s + 1));
  for (auto& v : avg) v += delta;
  return avg;
}

CheckResult check_determinants(const LpInstance& inst) {
  return guarded("linalg.determinants", [&] {
    const std::size_t n = inst.n(), m = inst.m();
    double worst = 0;
    std::size_t count = 0;
    const MatrixD Ad = to_double(inst.A);
    for_each_combination(m, n, [&](const std::vector<std::size_t>& B) {
      const double exact = to_double(determinant(inst.A.select_cols(B)));
      const double approx = determinant(Ad.select_cols(B));
      worst = std::max(worst, std::abs(exact - approx) / std::max(1.0, std::abs(exact)));
      return ++count < 20000;
    });
    if (worst > 1e-6) return fail("linalg.determinants", "relative gap " + fmt(worst));
    return pass("linalg.determinants", std::to_string(count) + " minors, max relative gap " + fmt(worst));
  });
}

CheckResult check_constants(const LpInstance& inst) {
  return guarded("lp.constants", [&] {
    const DeterminantInfo& info = require_det_info(inst);
    const InstanceConstants k = compute_constants(inst, VecQ(inst.m(), Rational(1)));
    Rational gpow_nm1 = 1, gpow_n;
    for (std::size_t i = 0; i + 1 < inst.n(); ++i) gpow_nm1 *= Rational(info.gamma_A);
    gpow_n = gpow_nm1 * Rational(info.gamma_A);
    std::ostringstream d;
    bool ok = true;
    if (!(gpow_nm1 * info.D <= info.D_S && info.D_S <= gpow_n * info.D)) {
      ok = false;
      d << "gamma^(n-1) D <= D_S <= gamma^n D fails: D=" << to_fraction(info.D) << " D_S=" << to_fraction(info.D_S) << "; ";
    }
    if (!(k.h0 > 0 && k.h0 <= Rational(1, 4))) {
      ok = false;
      d << "h0=" << to_fraction(k.h0) << " outside (0,1/4]; ";
    }
    d << "gamma=" << info.gamma_A.get_str() << " D=" << to_fraction(info.D) << " D_S=" << to_fraction(info.D_S)
      << " h0=" << to_fraction(k.h0);
    return ok ? pass("lp.constants", d.str()) : fail("lp.constants", d.str());
  });
}

CheckResult check_min_energy(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("min_energy.certificates", [&] {
    const MinEnergySolver solver(inst);
    const std::size_t n = inst.n(), m = inst.m();
    std::mt19937_64 rng(opt.seed);
    const MatrixD A = to_double(inst.A);
    const VecD b = to_double(inst.b), c = to_double(inst.c);
    const MatrixD K = to_double(nullspace(inst.A));
    std::optional<double> qbound;
    if (inst.det_info) {
      const auto& di = *inst.det_info;
      qbound = to_double(Rational(static_cast<unsigned long>(m)) * di.D * di.D * norm_1(inst.b) / Rational(di.gamma_A));
    }
    const double bnorm = norm_inf(b);
    for (std::size_t s = 0; s < opt.samples; ++s) {
      const VecD x = random_positive(rng, m);
      const auto sol = solver.solve(x);
      const VecD Aq = A * sol.q;
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(Aq[i] - b[i]) > 1e-8 * (1 + bnorm)) return fail("min_energy.certificates", "A q != b");
      const double E = energy(inst, x, sol.q);
      if (std::abs(E - dot(b, sol.p)) > 1e-8 * std::max(1.0, std::abs(E)))
        return fail("min_energy.certificates", "E(q)=" + fmt(E) + " but b^T p=" + fmt(dot(b, sol.p)));
      const VecD atp = transpose_times(A, sol.p);
      for (std::size_t e = 0; e < m; ++e)
        if (c[e] > 0 && std::abs(sol.q[e] - x[e] / c[e] * atp[e]) > 1e-8 * std::max(1.0, std::abs(sol.q[e])))
          return fail("min_energy.certificates", "q_e != (x_e/c_e) A_e^T p");
      if (qbound && norm_inf(sol.q) > *qbound + 1e-6)
        return fail("min_energy.certificates", "|q|_inf=" + fmt(norm_inf(sol.q)) + " above " + fmt(*qbound));
      for (std::size_t k = 0; k < opt.probes && K.cols() > 0; ++k) {
        VecD f = sol.q;
        for (std::size_t j = 0; j < K.cols(); ++j) {
          const double w = uniform_real(rng, -1, 1) * std::pow(10.0, uniform_real(rng, -4, 0));
          for (std::size_t e = 0; e < m; ++e) f[e] += w * K(e, j);
        }
        const double Ef = energy(inst, x, f);
        if (Ef < E - 1e-9) return fail("min_energy.certificates", "kernel perturbation lowered the energy");
      }
    }
    return pass("min_energy.certificates", std::to_string(opt.samples) + " samples");
  });
}

CheckResult check_zero_cost_limit(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("min_energy.zero_cost_limit", [&] {
    const bool any_zero = std::any_of(inst.c.begin(), inst.c.end(), [](const Rational& v) { return v == 0; });
    if (!any_zero) return skip("min_energy.zero_cost_limit", "no zero-cost column");
    LpInstance reg = inst;
    for (auto& v : reg.c)
      if (v == 0) v = Rational(1, 100000000);
    const MinEnergySolver exact(inst), soft(reg);
    std::mt19937_64 rng(opt.seed + 1);
    double worst = 0;
    for (std::size_t s = 0; s < opt.samples; ++s) {
      const VecD x = random_positive(rng, inst.m());
      worst = std::max(worst, dist_inf(exact.solve(x).q, soft.solve(x).q));
    }
    if (worst > 1e-4) return fail("min_energy.zero_cost_limit", "gap " + fmt(worst));
    return pass("min_energy.zero_cost_limit", "max gap " + fmt(worst));
  });
}

CheckResult check_bfs_bounds(const LpInstance& inst, const OracleReport& report) {
  return guarded("oracle.bfs_bounds", [&] {
    const DeterminantInfo& di = require_det_info(inst);
    const Rational gamma(di.gamma_A);
    const Rational lo = 1 / (di.D * gamma), hi = di.D * norm_1(inst.b) / gamma;
    for (const auto& s : basic_solutions(inst))
      for (const auto& v : s.values)
        if (v != 0 && (abs(v) < lo || abs(v) > hi))
          return fail("oracle.bfs_bounds", "entry " + to_fraction(v) + " outside [" + to_fraction(lo) + ", " + to_fraction(hi) + "]");
    (void)report;
    return pass("oracle.bfs_bounds", "[" + to_fraction(lo) + ", " + to_fraction(hi) + "]");
  });
}

CheckResult check_phi_bound(const LpInstance& inst, const OracleReport& report) {
  return guarded("oracle.phi_bound", [&] {
    if (!report.phi) return skip("oracle.phi_bound", "every feasible basic solution is optimal");
    const DeterminantInfo& di = require_det_info(inst);
    const Rational dg = di.D * Rational(di.gamma_A);
    const Rational lb = 1 / (dg * dg);
    if (*report.phi < lb) return fail("oracle.phi_bound", "phi=" + to_fraction(*report.phi) + " < " + to_fraction(lb));
    return pass("oracle.phi_bound", "phi=" + to_fraction(*report.phi) + " >= " + to_fraction(lb));
  });
}

CheckResult check_decompose(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("oracle.decompose", [&] {
    std::mt19937_64 rng(opt.seed + 2);
    const auto pool = basic_solutions(inst);
    for (std::size_t s = 0; s < std::min<std::size_t>(opt.samples, 5); ++s) {
      VecQ x;
      for (std::size_t e = 0; e < inst.m(); ++e) x.emplace_back(uniform_int(rng, 1, 20), uniform_int(rng, 1, 10));
      for (auto& v : x) v.canonicalize();
      const auto q = solve_general_exact(inst, x).q;
      const Decomposition dec = decompose(inst, q, pool);
      VecQ back = dec.kernel;
      Rational total = 0;
      for (std::size_t i = 0; i < dec.vertices.size(); ++i) {
        total += dec.lambda[i];
        if (!sign_compatible(dec.vertices[i], q)) return fail("oracle.decompose", "term not sign-compatible");
        for (std::size_t e = 0; e < back.size(); ++e) back[e] += dec.lambda[i] * dec.vertices[i][e];
      }
      if (back != q || total != 1) return fail("oracle.decompose", "round trip mismatch");
      if (std::any_of(dec.kernel.begin(), dec.kernel.end(), [](const Rational& v) { return v != 0; }))
        return fail("oracle.decompose", "minimum-energy solution has a kernel component");
    }
    return pass("oracle.decompose", "exact round trip, kernel part zero");
  });
}

CheckResult check_duality(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("domination.duality", [&] {
    std::mt19937_64 rng(opt.seed + 3);
    for (Mode mode : {Mode::Directed, Mode::Undirected}) {
      const DualVertexSet Y = enumerate_dual_vertices(inst, mode);
      for (std::size_t s = 0; s < opt.samples; ++s) {
        VecQ x;
        for (std::size_t e = 0; e < inst.m(); ++e) x.emplace_back(uniform_int(rng, 1, 30), uniform_int(rng, 1, 10));
        for (auto& v : x) v.canonicalize();
        const Rational primal = max_capacity_flow(inst, x, mode).t;
        Rational dual = -1;
        for (const auto& v : Y.vertices) {
          const Rational val = dot(v.d, x);
          if (dual < 0 || val < dual) dual = val;
        }
        if (primal != dual)
          return fail("domination.duality", to_string(mode) + ": primal " + to_fraction(primal) + " != dual " + to_fraction(dual));
      }
    }
    return pass("domination.duality", "exact equality in both modes");
  });
}

CheckResult check_dual_vertices(const LpInstance& inst) {
  return guarded("domination.vertices", [&] {
    const DeterminantInfo& di = require_det_info(inst);
    const Rational bound = norm_1(inst.b) * di.D_S;
    std::size_t count = 0;
    for (Mode mode : {Mode::Directed, Mode::Undirected}) {
      const DualVertexSet Y = enumerate_dual_vertices(inst, mode);
      for (const auto& v : Y.vertices) {
        if (!is_dual_vertex(inst, v, mode)) return fail("domination.vertices", "stored y is not a vertex");
        if (norm_inf(v.y) > bound) return fail("domination.vertices", "|y|_inf above |b|_1 D_S");
        ++count;
      }
    }
    return pass("domination.vertices", std::to_string(count) + " vertices, bound " + to_fraction(bound));
  });
}

CheckResult check_residual_geometry(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("dynamics.residual_geometry", [&] {
    if (inst.mode != Mode::Directed) return skip("dynamics.residual_geometry", "directed mode only");
    const InstanceConstants k = compute_constants(inst, VecQ(inst.m(), Rational(1)));
    const double h = to_double(k.h0);
    std::mt19937_64 rng(opt.seed + 4);
    const MinEnergySolver solver(inst);
    const MatrixD A = to_double(inst.A);
    const VecD b = to_double(inst.b);
    CapacityState s{random_positive(rng, inst.m()), 0, 0};
    auto residual = [&](const VecD& x) {
      VecD r = A * x;
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
      return r;
    };
    const VecD r0 = residual(s.x);
    const double scale = std::max(norm_inf(r0), 1e-300);
    for (std::size_t it = 1; it <= opt.steps; ++it) {
      s = step_directed(solver, s, h);
      const VecD r = residual(s.x);
      const double f = std::pow(1 - h, static_cast<double>(it));
      for (std::size_t i = 0; i < r.size(); ++i)
        if (std::abs(r[i] - f * r0[i]) > 1e-9 * scale)
          return fail("dynamics.residual_geometry", "step " + std::to_string(it) + " deviates");
    }
    return pass("dynamics.residual_geometry", std::to_string(opt.steps) + " steps, h=h0");
  });
}

CheckResult check_residual_geometry(const std::vector<TraceRecord>& trace, double rel_tol) {
  const std::string name = "trace.residual_geometry";
  if (trace.size() < 3) return skip(name, "need at least three rows");
  const double r0 = trace[0].residual_inf;
  if (r0 == 0) {
    for (const auto& r : trace)
      if (r.residual_inf > rel_tol) return fail(name, "residual appeared at iter " + std::to_string(r.iter));
    return pass(name, "residual identically zero");
  }
  const double span = static_cast<double>(trace[1].iter - trace[0].iter);
  if (span <= 0) return fail(name, "iterations are not increasing");
  const double rho = std::pow(trace[1].residual_inf / r0, 1.0 / span);
  for (std::size_t k = 2; k < trace.size(); ++k) {
    const double expect = r0 * std::pow(rho, static_cast<double>(trace[k].iter - trace[0].iter));
    if (std::abs(trace[k].residual_inf - expect) > rel_tol * r0)
      return fail(name, "iter " + std::to_string(trace[k].iter) + ": residual " + fmt(trace[k].residual_inf) +
                            ", geometric prediction " + fmt(expect));
  }
  return pass(name, "ratio " + fmt(rho) + " over " + std::to_string(trace.size()) + " rows");
}

CheckResult check_alpha_recurrence(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("dynamics.alpha_recurrence", [&] {
    if (inst.mode != Mode::Directed) return skip("dynamics.alpha_recurrence", "directed mode only");
    const OracleReport rep = enumerate_bfs(inst);
    const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
    const InstanceConstants k = compute_constants(inst, VecQ(inst.m(), Rational(1)));
    const double h = to_double(k.h0) / 2;
    const MinEnergySolver solver(inst);
    CapacityState s{to_double(dominating_start(inst, rep)), 0, 0};
    double alpha = alpha_value(Y, s.x), worst = 0;
    for (std::size_t it = 0; it < opt.steps; ++it) {
      s = step_directed(solver, s, h);
      const double next = alpha_value(Y, s.x);
      worst = std::max(worst, std::abs((1 - next) - (1 - h) * (1 - alpha)));
      alpha = next;
    }
    if (worst > 1e-9) return fail("dynamics.alpha_recurrence", "max deviation " + fmt(worst));
    return pass("dynamics.alpha_recurrence", "max deviation " + fmt(worst));
  });
}

CheckResult check_uniform_bound(const LpInstance& inst, const CheckOptions& opt) {
  return guarded("dynamics.uniform_bound", [&] {
    if (inst.mode != Mode::Directed) return skip("dynamics.uniform_bound", "directed mode only");
    const OracleReport rep = enumerate_bfs(inst);
    const VecQ x0 = dominating_start(inst, rep);
    const InstanceConstants k = compute_constants(inst, x0);
    const double psi = to_double(k.Psi0), h = to_double(k.h0);
    const MinEnergySolver solver(inst);
    CapacityState s{to_double(x0), 0, 0};
    for (std::size_t it = 0; it < opt.steps * 10; ++it) {
      s = step_directed(solver, s, h);
      if (norm_inf(s.x) > psi) return fail("dynamics.uniform_bound", "|x|_inf above Psi0 at step " + std::to_string(it + 1));
    }
    return pass("dynamics.uniform_bound", "Psi0=" + fmt(psi));
  });
}

std::vector<CheckResult> run_instance_checks(const LpInstance& inst, const CheckOptions& opt) {
  std::vector<CheckResult> out;
  out.push_back(check_determinants(inst));
  out.push_back(check_constants(inst));
  out.push_back(check_min_energy(inst, opt));
  out.push_back(check_zero_cost_limit(inst, opt));
  std::optional<OracleReport> rep;
  try {
    rep = enumerate_bfs(inst);
  } catch (const Error& e) {
    out.push_back(e.kind() == ErrorKind::SizeCap ? skip("oracle.enumerate", e.what()) : fail("oracle.enumerate", e.what()));
  }
  if (rep) {
    out.push_back(check_bfs_bounds(inst, *rep));
    out.push_back(check_phi_bound(inst, *rep));
  }
  out.push_back(check_decompose(inst, opt));
  out.push_back(check_duality(inst, opt));
  out.push_back(check_dual_vertices(inst));
  out.push_back(check_residual_geometry(inst, opt));
  out.push_back(check_alpha_recurrence(inst, opt));
  out.push_back(check_uniform_bound(inst, opt));
  return out;
}

std::string checks_to_json(const std::vector<CheckResult>& results, int indent) {
  using json = nlohmann::ordered_json;
  json arr = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"name", r.name}, {"passed", r.passed}, {"skipped", r.skipped}, {"detail", r.detail}});
  }
  json j;
  j["passed"] = all;
  j["checks"] = arr;
  return j.dump(indent) + "\n";
}

}  // namespace physarum
