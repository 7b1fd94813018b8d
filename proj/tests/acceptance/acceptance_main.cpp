// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria (capped at 1).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../unit/oracles.hpp"
#include "cli/commands.hpp"
#include "physarum/checks.hpp"
#include "physarum/domination.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/errors.hpp"
#include "physarum/instance_io.hpp"
#include "physarum/instances.hpp"
#include "physarum/lp_model.hpp"
#include "physarum/min_energy.hpp"
#include "physarum/oracle.hpp"

using namespace physarum;

namespace {

// Tolerances. These are part of the criteria and must not be loosened.
constexpr double kResidualRel = 1e-9;       // 1
constexpr double kAlphaTol = 1e-9;          // 2
constexpr double kDistTol = 1e-3;           // 3, 10
constexpr double kCostTol = 1e-3;           // 3
constexpr double kSumDrift = 1e-12;         // 4
constexpr double kEnergyRel = 1e-8;         // 5
constexpr double kFeasTol = 1e-8;           // 5
constexpr double kProbeTol = 1e-9;          // 5
constexpr double kRegularization = 1e-8;    // 6
constexpr double kRegularizedAgree = 1e-4;  // 6
constexpr double kPointTol = 1e-3;          // 7
constexpr double kMonotoneTol = 1e-6;       // 7
constexpr double kEnvelopeTol = 1e-3;       // 8
constexpr double kPsiRel = 1e-12;           // 9
constexpr double kPotentialTol = 1e-9;      // 11
constexpr std::uint64_t kPreconditionSteps = 2'000'000;  // 10

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// PHYSARUM_ACCEPTANCE_VERBOSE=1 prints one line per run to stderr.
void note(const std::string& line) {
  static const bool on = std::getenv("PHYSARUM_ACCEPTANCE_VERBOSE") != nullptr;
  if (on) std::fprintf(stderr, "  %s\n", line.c_str());
}

Outcome ok(std::string d) { return {true, std::move(d)}; }
Outcome bad(std::string d) { return {false, std::move(d)}; }

// Shortest paths on 3-4 nodes with at most 7 arcs.
LpInstance graph_instance(std::uint64_t seed, Mode mode) {
  std::mt19937_64 rng(seed * 7919 + 13);
  GeneratorSpec s;
  s.kind = GeneratorKind::ShortestPath;
  s.seed = seed;
  s.mode = mode;
  s.max_cost = 5;
  s.nodes = static_cast<std::size_t>(uniform_int(rng, 3, 4));
  s.arcs = static_cast<std::size_t>(uniform_int(rng, static_cast<long>(s.nodes), 7));
  return generate(s);
}

// Random integral LPs with n <= 3, m <= 7, entries in [-3, 3].
LpInstance lp_instance(std::uint64_t seed, Mode mode) {
  std::mt19937_64 rng(seed * 7919 + 13);
  GeneratorSpec s;
  s.kind = GeneratorKind::RandomPositiveLp;
  s.seed = seed;
  s.mode = mode;
  s.max_cost = 5;
  s.rows = static_cast<std::size_t>(uniform_int(rng, 1, 3));
  s.cols = static_cast<std::size_t>(uniform_int(rng, static_cast<long>(s.rows) + 1, 7));
  s.max_entry = 3;
  s.max_demand = 3;
  return generate(s);
}

// Alternates between the two kinds.
LpInstance family(std::uint64_t seed, Mode mode) {
  return seed % 2 == 0 ? graph_instance(seed, mode) : lp_instance(seed, mode);
}

VecD random_positive(std::mt19937_64& rng, std::size_t m, double lo, double hi) {
  VecD x(m);
  for (auto& v : x) v = uniform_real(rng, lo, hi);
  return x;
}

VecD residual(const LpInstance& inst, const VecD& x) {
  const VecD Ax = to_double(inst.A) * x;
  VecD r = to_double(inst.b);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= Ax[i];
  return r;
}

double cost(const LpInstance& inst, const VecD& x) {
  double s = 0;
  for (std::size_t e = 0; e < x.size(); ++e) s += to_double(inst.c[e]) * x[e];
  return s;
}

double dist_to(const VecD& x, const VecQ& f) {
  double d = 0;
  for (std::size_t e = 0; e < f.size(); ++e) d = std::max(d, std::abs(x[e] - std::abs(to_double(f[e]))));
  return d;
}

Rational D_gamma(const LpInstance& inst) {
  const auto& di = require_det_info(inst);
  return di.D * Rational(di.gamma_A);
}

// 1. r_k = (1-h)^k r_0 with h = h₀ from arbitrary positive starts.
Outcome residual_decay() {
  std::mt19937_64 rng(101);
  double worst = 0;
  std::size_t runs = 0;
  for (std::uint64_t seed = 1; runs < 50; ++seed) {
    const LpInstance inst = family(seed, Mode::Directed);
    const VecD x0 = random_positive(rng, inst.m(), 0.1, 2.0);
    const double h = to_double(compute_constants(inst, to_rational(x0)).h0);
    const MinEnergySolver solver(inst);
    const VecD r0 = residual(inst, x0);
    const double scale = norm_inf(r0);
    CapacityState s{x0, 0, 0};
    for (int k = 1; k <= 200; ++k) {
      s = step_directed(solver, s, h);
      const VecD r = residual(inst, s.x);
      const double f = std::pow(1 - h, k);
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double err = std::abs(r[i] - f * r0[i]);
        if (err > kResidualRel * scale) return bad("seed " + std::to_string(seed) + " k=" + std::to_string(k) + " err=" + num(err));
        worst = std::max(worst, scale > 0 ? err / scale : 0.0);
      }
    }
    ++runs;
  }
  return ok("50 runs x 200 steps, worst relative error " + num(worst));
}

// 2. 1 − α' = (1−h)(1 − α) along directed trajectories.
Outcome alpha_recurrence() {
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LpInstance inst = family(seed, Mode::Directed);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
    const VecQ x0 = dominating_start(inst, rep);
    const double h = to_double(compute_constants(inst, x0).h0);
    const MinEnergySolver solver(inst);
    CapacityState s{to_double(x0), 0, 0};
    double a = alpha_value(Y, s.x);
    for (int l = 0; l < 100; ++l) {
      s = step_directed(solver, s, h);
      const double a1 = alpha_value(Y, s.x);
      const double err = std::abs((1 - a1) - (1 - h) * (1 - a));
      if (err > kAlphaTol) return bad("seed " + std::to_string(seed) + " step " + std::to_string(l) + " err=" + num(err));
      worst = std::max(worst, err);
      a = a1;
    }
  }
  return ok("20 runs x 100 steps, worst error " + num(worst));
}

// 3. Planned directed runs on shortest-path instances reach the unique optimum.
Outcome oracle_equivalence() {
  std::size_t runs = 0;
  std::uint64_t most = 0;
  double worst_gap = 0;
  for (std::uint64_t seed = 1; runs < 30; ++seed) {
    const LpInstance inst = graph_instance(seed, Mode::Directed);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    if (rep.optimal.size() != 1 || !rep.phi) continue;
    const VecQ x0 = dominating_start(inst, rep);
    const InstanceConstants k = compute_constants(inst, x0);
    const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
    const Rational alpha0 = alpha_of(inst, Y, x0).alpha;
    // dist < 1e-3/‖c‖₁ keeps the cost gap under 1e-3 as well.
    const double eps = kDistTol / std::max(1.0, to_double(norm_1(inst.c))) * to_double(D_gamma(inst));
    const StepPlan plan = plan_steps(inst, k, x0, alpha0, *rep.phi / rep.opt, *rep.phi, eps);
    RunOptions opt;
    opt.eps = eps;
    opt.max_iters = plan.total_steps();
    opt.oracle = &rep;
    opt.trace_stride = 0;
    const RunResult res = run(inst, to_double(x0), plan, opt);
    const double d = dist_to(res.state.x, rep.all_bfs[rep.optimal[0]].values);
    const double gap = std::abs(cost(inst, res.state.x) - to_double(rep.opt));
    if (res.verdict != Verdict::Converged || d >= kDistTol || gap > kCostTol)
      return bad("seed " + std::to_string(seed) + " verdict " + to_string(res.verdict) + " dist=" + num(d) + " gap=" + num(gap));
    note("seed " + std::to_string(seed) + ": " + std::to_string(res.iterations) + " of " + std::to_string(opt.max_iters) + " steps");
    most = std::max(most, res.iterations);
    worst_gap = std::max(worst_gap, gap);
    ++runs;
  }
  return ok("30 runs, at most " + std::to_string(most) + " steps, worst cost gap " + num(worst_gap));
}

// 4. The two-column instance with opt = Φ = 1 and h = 0.1.
Outcome thm_one_replication() {
  const LpInstance inst = validate(thm_one_instance(1, 1));
  const MinEnergySolver solver(inst);
  const double h = 0.1, opt = 1, phi = 1;
  CapacityState s{{0.5, 0.5}, 0, 0};
  const double eps_list[] = {1e-1, 1e-2, 1e-3};
  std::uint64_t first[3] = {0, 0, 0};
  double drift = 0;
  for (std::uint64_t k = 1; k <= 10000; ++k) {
    s = step_directed(solver, s, h);
    drift = std::max(drift, std::abs(s.x[0] + s.x[1] - 1));
    const double env = 0.5 * std::exp(-2.0 * static_cast<double>(k) * h * phi / (opt + phi));
    if (s.x[1] < env) return bad("x2 below envelope at k=" + std::to_string(k));
    for (int i = 0; i < 3; ++i)
      if (!first[i] && s.x[1] <= eps_list[i]) first[i] = k;
  }
  if (drift > kSumDrift) return bad("sum drift " + num(drift));
  std::string detail = "drift " + num(drift);
  for (int i = 0; i < 3; ++i) {
    const double lb = std::log(2 / eps_list[i]) / (2 * h);
    if (!first[i] || static_cast<double>(first[i]) < lb)
      return bad("eps=" + num(eps_list[i]) + " first k=" + std::to_string(first[i]) + " < " + num(lb));
    detail += ", eps " + num(eps_list[i]) + ": k=" + std::to_string(first[i]) + " >= " + num(lb);
  }
  return ok(detail);
}

// 5. Certificates for the minimum-energy solution.
Outcome min_energy_certificates() {
  std::mt19937_64 rng(505);
  std::size_t pairs = 0, probes = 0;
  for (std::uint64_t seed = 1; pairs < 100; ++seed) {
    const Mode mode = seed % 3 == 0 ? Mode::Undirected : Mode::Directed;
    const LpInstance inst = family(seed, mode);
    const std::size_t m = inst.m();
    const MatrixD A = to_double(inst.A);
    const VecD b = to_double(inst.b);
    const auto& di = require_det_info(inst);
    const double q_bound = to_double(Rational(static_cast<unsigned long>(m)) * di.D * di.D * norm_1(inst.b) / Rational(di.gamma_A));
    std::vector<VecD> kernel;
    for (const auto& w : circuits(inst.A)) kernel.push_back(to_double(w));
    for (int rep = 0; rep < 4; ++rep, ++pairs) {
      const VecD x = random_positive(rng, m, 0.05, 3.0);
      const MinEnergySolution sol = solve_general(inst, x);
      const VecD Aq = A * sol.q;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (std::abs(Aq[i] - b[i]) > kFeasTol) return bad("Aq != b, seed " + std::to_string(seed));
      const double E = energy(inst, x, sol.q);
      const double bp = dot(b, sol.p);
      if (std::abs(E - bp) > kEnergyRel * std::max(1.0, std::abs(E))) return bad("E != b'p, seed " + std::to_string(seed));
      if (norm_inf(sol.q) > q_bound) return bad("|q| above bound, seed " + std::to_string(seed));
      if (kernel.empty()) continue;
      for (int t = 0; t < 200; ++t, ++probes) {
        VecD w(m, 0.0);
        for (const auto& k : kernel) {
          const double coef = uniform_real(rng, -1, 1);
          for (std::size_t e = 0; e < m; ++e) w[e] += coef * k[e];
        }
        const double len = norm_inf(w);
        if (len == 0) continue;
        const double scale = std::pow(10.0, uniform_real(rng, -4, 0)) / len;
        VecD f = sol.q;
        for (std::size_t e = 0; e < m; ++e) f[e] += scale * w[e];
        if (energy(inst, x, f) < E - kProbeTol * (1 + E)) return bad("kernel probe lowers energy, seed " + std::to_string(seed));
      }
    }
  }
  return ok(std::to_string(pairs) + " pairs, " + std::to_string(probes) + " kernel probes");
}

// 6. Zero-cost columns against a tiny positive cost.
Outcome zero_cost_solver() {
  std::mt19937_64 rng(606);
  std::size_t count = 0;
  double worst = 0;
  for (std::uint64_t seed = 1; count < 20; ++seed) {
    LpInstance raw = family(seed, seed % 2 ? Mode::Undirected : Mode::Directed);
    const std::size_t zeros = static_cast<std::size_t>(uniform_int(rng, 1, 2));
    for (std::size_t z = 0; z < zeros; ++z) raw.c[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<long>(raw.m()) - 1))] = 0;
    LpInstance inst;
    try {
      inst = validate(raw);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::KernelCostViolation) continue;
      throw;
    }
    LpInstance reg = inst;
    for (auto& c : reg.c)
      if (c == 0) c = rational_from_double(kRegularization);
    for (int rep = 0; rep < 5; ++rep) {
      const VecD x = random_positive(rng, inst.m(), 0.1, 2.0);
      const MinEnergySolution a = solve_general(inst, x);
      const MinEnergySolution r = solve_positive(reg, x);
      const double d = std::max(dist_inf(a.q, r.q), dist_inf(a.p, r.p));
      if (d > kRegularizedAgree) return bad("seed " + std::to_string(seed) + " differs by " + num(d));
      worst = std::max(worst, d);
    }
    ++count;
  }
  const LpInstance demo = validate(zero_cost_demo_instance());
  const VecQ q_expect{0, 0, 1}, p_expect{0, 0};
  for (const VecQ& x : {VecQ{1, 1, 1}, VecQ{ratio(1, 3), 2, ratio(5, 7)}}) {
    const ExactMinEnergySolution s = solve_general_exact(demo, x);
    if (s.q != q_expect || s.p != p_expect) return bad("zero_cost_demo exact solve differs");
    const MinEnergySolution f = solve_general(demo, to_double(x));
    if (f.q != to_double(q_expect) || f.p != to_double(p_expect)) return bad("zero_cost_demo float solve differs");
  }
  return ok("20 instances, worst gap " + num(worst) + "; zero_cost_demo exact");
}

// 7. Continuous undirected triangle.
Outcome continuous_triangle() {
  const LpInstance inst = validate(triangle_instance(Mode::Undirected));
  const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Undirected);
  ContinuousOptions opt;
  opt.T = 30;
  opt.dt = 1e-3;
  opt.method = Integrator::RK4;
  opt.check_envelope = false;
  const ContinuousResult res = integrate_continuous(inst, {1, 1, 1}, opt);
  const VecD& xT = res.samples.back().x;
  const double d = dist_inf(xT, {1, 1, 0});
  const double cT = cost(inst, xT);
  if (d >= kPointTol) return bad("|x(T) - (1,1,0)| = " + num(d));
  if (cT < 2 || cT > 2 + kPointTol) return bad("cost(T) = " + num(cT));
  std::size_t checked = 0;
  for (std::size_t i = 1; i < res.samples.size(); ++i) {
    if (alpha_value(Y, res.samples[i - 1].x) < 1) continue;
    const double c0 = cost(inst, res.samples[i - 1].x), c1 = cost(inst, res.samples[i].x);
    if (c1 > c0 + kMonotoneTol) return bad("cost rises at t=" + num(res.samples[i].t));
    ++checked;
  }
  if (checked == 0) return bad("no step with min d'x >= 1");
  return ok("dist " + num(d) + ", cost " + std::to_string(cT) + ", " + std::to_string(checked) + " monotone steps");
}

// 8. Samples stay within x(0)e^{-t} and B + max(0, x(0) − B)e^{-t}.
Outcome gronwall_envelope() {
  std::mt19937_64 rng(808);
  double worst = -std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LpInstance inst = family(seed, Mode::Undirected);
    const auto& di = require_det_info(inst);
    const double B = to_double(di.D * norm_1(inst.b) / Rational(di.gamma_A));
    const VecD x0 = random_positive(rng, inst.m(), 0.05, 2 * B + 1);
    ContinuousOptions opt;
    opt.T = 8;
    opt.dt = 1e-3;
    opt.check_envelope = false;
    const ContinuousResult res = integrate_continuous(inst, x0, opt);
    for (const auto& s : res.samples) {
      const double decay = std::exp(-s.t);
      for (std::size_t e = 0; e < x0.size(); ++e) {
        const double lo = x0[e] * decay, hi = B + std::max(0.0, x0[e] - B) * decay;
        const double excess = std::max(lo - s.x[e], s.x[e] - hi);
        if (excess > kEnvelopeTol) return bad("seed " + std::to_string(seed) + " t=" + num(s.t) + " excess " + num(excess));
        worst = std::max(worst, excess);
      }
      ++samples;
    }
  }
  return ok(std::to_string(samples) + " samples, largest excess " + num(worst));
}

// 9. ‖x‖∞ ≤ Ψ⁽⁰⁾, Φ ≥ 1/(Dγ)², and the entry bounds of basic solutions.
Outcome bounds_suite() {
  std::mt19937_64 rng(909);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const LpInstance inst = family(seed, Mode::Directed);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    const VecD x0 = seed % 2 ? random_positive(rng, inst.m(), 0.1, 2.0) : to_double(dominating_start(inst, rep));
    const InstanceConstants k = compute_constants(inst, to_rational(x0));
    const double psi = to_double(k.Psi0), h = to_double(k.h0);
    const MinEnergySolver solver(inst);
    CapacityState s{x0, 0, 0};
    for (int step = 0; step < 500; ++step) {
      s = step_directed(solver, s, h);
      if (norm_inf(s.x) > psi * (1 + kPsiRel)) return bad("|x| above Psi, seed " + std::to_string(seed));
    }
  }
  std::size_t with_phi = 0, bases = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::RandomPositiveLp;
    spec.seed = 9000 + seed;
    spec.rows = 1 + seed % 3;
    spec.cols = std::min<std::size_t>(7, spec.rows + 1 + seed % 4);
    spec.max_entry = 3;
    spec.max_demand = 3;
    const LpInstance inst = generate(spec);
    const Rational dg = D_gamma(inst);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    if (rep.phi) {
      ++with_phi;
      if (*rep.phi < 1 / (dg * dg)) return bad("Phi below 1/(D gamma)^2, seed " + std::to_string(spec.seed));
    }
    const auto& di = require_det_info(inst);
    const Rational lo = 1 / dg, hi = di.D * norm_1(inst.b) / Rational(di.gamma_A);
    testing_oracles::subsets(inst.m(), inst.n(), [&](const std::vector<std::size_t>& B) {
      const auto fB = testing_oracles::cramer(inst.A.select_cols(B), inst.b);
      if (!fB) return;
      ++bases;
      for (const auto& v : *fB)
        if (v != 0 && (abs(v) < lo || abs(v) > hi)) throw Error(ErrorKind::InvalidArgument, "basic solution entry " + to_fraction(v) + " out of bounds");
    });
  }
  return ok("Psi over 20 runs; Phi on " + std::to_string(with_phi) + " instances; " + std::to_string(bases) + " bases");
}

// 10. Preconditioned starts on shortest-path instances.
Outcome preconditioning() {
  std::mt19937_64 rng(1010);
  std::size_t count = 0;
  std::uint64_t most = 0;
  for (std::uint64_t seed = 1; count < 20 && seed < 400; ++seed) {
    const LpInstance inst = graph_instance(seed, Mode::Directed);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    if (rep.optimal.size() != 1) continue;
    const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
    VecQ x0;
    for (int t = 0; t < 50 && x0.empty(); ++t) {
      VecQ cand = to_rational(random_positive(rng, inst.m(), 0.1, 2.0));
      if (alpha_of(inst, Y, cand).alpha <= 0) x0 = cand;
    }
    if (x0.empty()) continue;
    const Preconditioned pre = precondition(inst, x0);
    const LpInstance& ext = pre.extended;
    const DualVertexSet Y2 = enumerate_dual_vertices(ext, Mode::Directed);
    for (const auto& y : Y2.vertices)
      if (dot(y.Aty, pre.x0) < 1) return bad("extended start not dominating, seed " + std::to_string(seed));
    const OracleReport rep2 = enumerate_bfs(ext, Mode::Directed);
    const InstanceConstants k = compute_constants(ext, pre.x0);
    const Rational alpha0 = alpha_of(ext, Y2, pre.x0).alpha;
    // Phase 1 as planned, then h₀ instead of the much smaller phase-2 step.
    StepPlan plan = plan_steps(ext, k, pre.x0, alpha0, *rep2.phi / rep2.opt, *rep2.phi, kDistTol);
    plan.phase2_h = to_double(k.h0);
    RunOptions opt;
    opt.eps = kDistTol * to_double(D_gamma(ext));
    opt.max_iters = plan.phase1_steps + kPreconditionSteps;
    opt.oracle = &rep2;
    opt.trace_stride = 0;
    const RunResult res = run(ext, to_double(pre.x0), plan, opt);
    const VecD& x = res.state.x;
    const double z = x.back();
    const double d = dist_to(VecD(x.begin(), x.end() - 1), rep.all_bfs[rep.optimal[0]].values);
    if (d >= kDistTol || z >= kDistTol)
      return bad("seed " + std::to_string(seed) + " dist=" + num(d) + " z=" + num(z) + " after " + std::to_string(res.iterations));
    note("seed " + std::to_string(seed) + ": " + std::to_string(res.iterations) + " steps");
    most = std::max(most, res.iterations);
    ++count;
  }
  if (count < 20) return bad("only " + std::to_string(count) + " instances with a non-dominating start");
  return ok("20 instances, at most " + std::to_string(most) + " steps");
}

// 11. Per-step potential gain of f* over every non-optimal basic solution.
Outcome potential_inequality() {
  std::size_t runs = 0, comparisons = 0;
  double slack = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; runs < 10; ++seed) {
    const LpInstance inst = family(seed, Mode::Directed);
    const OracleReport rep = enumerate_bfs(inst, Mode::Directed);
    if (!rep.phi) continue;
    const DualVertexSet Y = enumerate_dual_vertices(inst, Mode::Directed);
    const VecQ x0 = dominating_start(inst, rep);
    const InstanceConstants k = compute_constants(inst, x0);
    const Rational hq = *rep.phi / rep.opt * k.h0 * k.h0 / 2;
    const double h = to_double(hq), phi = to_double(*rep.phi);
    const MinEnergySolver solver(inst);
    const VecD c = to_double(inst.c);
    auto gain = [&](const VecQ& g, const VecD& x, const VecD& q) {
      double s = 0;
      for (std::size_t e = 0; e < g.size(); ++e)
        if (g[e] != 0) s += to_double(g[e]) * c[e] * std::log1p(h * (q[e] / x[e] - 1));
      return s;
    };
    VecD x = to_double(x0);
    const double lo = 0.5, hi = 1 / to_double(k.h0);
    for (int l = 0; l < 200; ++l) {
      const double a = alpha_value(Y, x);
      if (a < lo || a > hi) return bad("alpha left [1/2, 1/h0], seed " + std::to_string(seed));
      const VecD q = solver.solve(x).q;
      for (std::size_t i : rep.optimal) {
        const double gf = gain(rep.all_bfs[i].values, x, q);
        for (std::size_t j : rep.non_optimal) {
          const double gg = gain(rep.all_bfs[j].values, x, q);
          const double margin = gf - (gg + h * phi / 2);
          if (margin < -kPotentialTol) return bad("seed " + std::to_string(seed) + " step " + std::to_string(l) + " margin " + num(margin));
          slack = std::min(slack, margin);
          ++comparisons;
        }
      }
      for (std::size_t e = 0; e < x.size(); ++e) x[e] = (1 - h) * x[e] + h * q[e];
    }
    ++runs;
  }
  return ok("10 runs x 200 steps, " + std::to_string(comparisons) + " comparisons, min margin " + num(slack));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 12. Two solves with the same configuration write the same trace bytes.
Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("physarum_acc_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::string data = PHYSARUM_TEST_DATA;
  std::string traces[2];
  for (int i = 0; i < 2; ++i) {
    const auto path = dir / ("trace" + std::to_string(i) + ".csv");
    std::ostringstream out, err;
    const int code = cli::run({"solve", "--instance", data + "/triangle.json", "--mode", "directed", "--h", "0.01",
                               "--max-iters", "3000", "--trace", path.string()},
                              out, err);
    if (code != cli::kExitOk && code != cli::kExitIterationCap) return bad("solve exited " + std::to_string(code) + ": " + err.str());
    traces[i] = slurp(path);
  }
  std::filesystem::remove_all(dir);
  if (traces[0].empty()) return bad("empty trace");
  if (traces[0] != traces[1]) return bad("traces differ");
  return ok(std::to_string(traces[0].size()) + " identical bytes");
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"residual decay", residual_decay},
      {"alpha recurrence", alpha_recurrence},
      {"oracle equivalence", oracle_equivalence},
      {"two-column replication", thm_one_replication},
      {"min-energy certificates", min_energy_certificates},
      {"zero-cost block solver", zero_cost_solver},
      {"continuous triangle", continuous_triangle},
      {"continuous envelope", gronwall_envelope},
      {"bounds suite", bounds_suite},
      {"preconditioning", preconditioning},
      {"potential inequality", potential_inequality},
      {"determinism", determinism},
  };
  int failed = 0;
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int a = 1; a < argc; ++a) {
    const long i = std::strtol(argv[a], nullptr, 10);
    if (i >= 1 && i <= static_cast<long>(criteria.size())) selected[static_cast<std::size_t>(i - 1)] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = bad(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
