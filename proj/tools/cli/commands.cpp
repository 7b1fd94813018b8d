#include "cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "physarum/checks.hpp"
#include "physarum/domination.hpp"
#include "physarum/dynamics.hpp"
#include "physarum/errors.hpp"
#include "physarum/instance_io.hpp"
#include "physarum/instances.hpp"
#include "physarum/limits.hpp"
#include "physarum/lp_model.hpp"
#include "physarum/min_energy.hpp"
#include "physarum/oracle.hpp"
#include "physarum/trace.hpp"

namespace physarum::cli {

namespace {

constexpr std::uint64_t kAutoTraceRows = 100000;

using json = nlohmann::ordered_json;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SizeCap:
      return kExitSizeCap;
    case ErrorKind::NotStronglyDominating:
      return kExitNotDominating;
    case ErrorKind::InfeasibleShape:
    case ErrorKind::KernelCostViolation:
    case ErrorKind::NegativeCost:
    case ErrorKind::ZeroDemand:
    case ErrorKind::NonIntegerData:
    case ErrorKind::Infeasible:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DegenerateGraph:
      return kExitInvalid;
    default:
      return kExitFailure;
  }
}

std::string num(double v) { return format_number(v); }

std::string vec_str(const VecD& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

json fractions(const VecQ& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_fraction(x));
  return a;
}

// JSON number carrying exactly the 12-digit rendering.
json rounded(double v) {
  if (!std::isfinite(v)) return num(v);
  return std::stod(num(v));
}

LpInstance load_valid(const std::string& path, std::optional<Mode> mode) {
  LpInstance raw = load_instance(path);
  if (mode) raw.mode = *mode;
  try {
    return validate(std::move(raw));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonPositiveCapacity) throw Error(ErrorKind::InvalidArgument, e.what());
    throw;
  }
}

VecQ start_point(const LpInstance& inst) { return inst.x0 ? *inst.x0 : VecQ(inst.m(), Rational(1)); }

std::optional<OracleReport> try_oracle(const LpInstance& inst, Mode mode, std::ostream& err) {
  try {
    return enumerate_bfs(inst, mode);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeCap) throw;
    err << "oracle unavailable: " << e.what() << "\n";
    return std::nullopt;
  }
}

struct SolveConfig {
  std::string instance;
  std::string mode;
  std::string h = "auto";
  double eps = 1e-3;
  std::optional<std::uint64_t> max_iters;
  std::string trace;
  bool no_oracle = false;
  bool use_oracle_phi = false;
  std::optional<std::size_t> trace_stride;
  double T = 30;
  double dt = 1e-3;
  std::string integrator = "rk4";
  std::size_t sample_every = 100;
};

double parse_step(const std::string& text) {
  std::size_t used = 0;
  double h = 0;
  try {
    h = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(h > 0 && h < 1))
    throw Error(ErrorKind::InvalidArgument, "--h must be 'auto' or a decimal in (0, 1), got '" + text + "'");
  return h;
}

int solve_continuous(const SolveConfig& cfg, std::ostream& out, std::ostream& err) {
  const LpInstance inst = load_valid(cfg.instance, Mode::Undirected);
  const auto t0 = std::chrono::steady_clock::now();
  ContinuousOptions co;
  co.T = cfg.T;
  co.dt = cfg.dt;
  co.method = cfg.integrator == "euler" ? Integrator::Euler : Integrator::RK4;
  co.sample_every = std::max<std::size_t>(1, cfg.sample_every);
  co.check_envelope = inst.det_info != nullptr;
  const VecD x0 = to_double(start_point(inst));
  const ContinuousResult res = integrate_continuous(inst, x0, co);

  std::optional<OracleReport> rep;
  if (!cfg.no_oracle) rep = try_oracle(inst, Mode::Undirected, err);
  std::optional<DualVertexSet> Y;
  try {
    Y = enumerate_dual_vertices(inst, Mode::Undirected);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeCap) throw;
  }

  const MinEnergySolver solver(inst);
  const MatrixD A = to_double(inst.A);
  const VecD b = to_double(inst.b), c = to_double(inst.c);
  std::vector<TraceRecord> trace;
  double fix = 0;
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const auto& s = res.samples[i];
    const auto sol = solver.solve(s.x);
    TraceRecord r;
    r.iter = static_cast<std::uint64_t>(std::llround(s.t / cfg.dt));
    r.time = s.t;
    r.cost = dot(c, s.x);
    const VecD Ax = A * s.x;
    for (std::size_t k = 0; k < Ax.size(); ++k) r.residual_inf = std::max(r.residual_inf, std::abs(b[k] - Ax[k]));
    r.energy = sol.energy;
    r.x_min = *std::min_element(s.x.begin(), s.x.end());
    r.x_max = *std::max_element(s.x.begin(), s.x.end());
    if (rep) r.dist_inf = dist_to_opt(*rep, s.x);
    if (Y) {
      const LyapunovReport ly = lyapunov_report(solver, s.x, *Y);
      r.alpha = ly.C_opt;
      r.lyap_h = ly.h;
    }
    if (i + 1 == res.samples.size()) {
      fix = 0;
      for (std::size_t e = 0; e < s.x.size(); ++e) fix = std::max(fix, std::abs(s.x[e] - std::abs(sol.q[e])));
    }
    trace.push_back(r);
  }
  if (!cfg.trace.empty()) write_file(cfg.trace, trace_to_csv(trace));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const TraceRecord& last = trace.back();
  bool converged = rep ? *last.dist_inf < cfg.eps : std::max(last.residual_inf, fix) < cfg.eps;
  out << "mode: undirected-continuous\n";
  out << "verdict: " << (converged ? "Converged" : "IterationCap") << "\n";
  out << "time: " << num(last.time) << "\n";
  out << "steps: " << last.iter << "\n";
  out << "final_cost: " << num(last.cost) << "\n";
  out << "final_residual: " << num(last.residual_inf) << "\n";
  if (last.dist_inf) out << "final_dist: " << num(*last.dist_inf) << "\n";
  if (co.check_envelope) out << "envelope_violation: " << num(res.max_envelope_violation) << "\n";
  if (res.clamped) out << "clamped: true\n";
  out << "x: " << vec_str(res.samples.back().x) << "\n";
  out << "wall_time_s: " << num(wall) << "\n";
  return converged ? kExitOk : kExitIterationCap;
}

int solve_discrete(const SolveConfig& cfg, std::ostream& out, std::ostream& err) {
  std::optional<Mode> forced;
  if (cfg.mode == "directed") forced = Mode::Directed;
  if (cfg.mode == "undirected") forced = Mode::Undirected;
  const LpInstance inst = load_valid(cfg.instance, forced);
  const Mode mode = inst.mode;
  const auto t0 = std::chrono::steady_clock::now();
  const VecQ x0q = start_point(inst);

  std::optional<OracleReport> rep;
  if (!cfg.no_oracle) rep = try_oracle(inst, mode, err);
  std::optional<DualVertexSet> Y;
  try {
    Y = enumerate_dual_vertices(inst, mode);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeCap) throw;
  }

  StepPlan plan;
  if (cfg.h == "auto") {
    const InstanceConstants k = compute_constants(inst, x0q);
    if (mode == Mode::Directed) {
      if (!Y) throw Error(ErrorKind::SizeCap, "--h auto needs the dual vertex set; pass an explicit --h");
      const Rational alpha0 = alpha_of(inst, *Y, x0q).alpha;
      std::optional<Rational> ratio, phi;
      if (cfg.use_oracle_phi && rep && rep->phi && rep->opt > 0) {
        ratio = *rep->phi / rep->opt;
        phi = *rep->phi;
      }
      plan = plan_steps(inst, k, x0q, alpha0, ratio, phi, cfg.eps);
    } else {
      plan = StepPlan::fixed(to_double(k.h0));
    }
  } else {
    plan = StepPlan::fixed(parse_step(cfg.h));
  }
  if (!(cfg.eps > 0 && cfg.eps < 1)) throw Error(ErrorKind::InvalidArgument, "--eps must lie in (0, 1)");

  RunOptions ro;
  ro.kind = mode == Mode::Directed ? DiscreteKind::Directed : DiscreteKind::Undirected;
  ro.eps = cfg.eps;
  ro.oracle = rep ? &*rep : nullptr;
  ro.Y = Y ? &*Y : nullptr;
  if (cfg.max_iters) {
    ro.max_iters = *cfg.max_iters;
  } else if (cfg.h == "auto" && mode == Mode::Directed) {
    ro.max_iters = std::min<std::uint64_t>(plan.total_steps(), 100'000'000);
  }
  // No trace file, no rows. Otherwise an unset stride keeps about kAutoTraceRows rows.
  if (cfg.trace.empty()) ro.trace_stride = 0;
  else if (cfg.trace_stride) ro.trace_stride = std::max<std::size_t>(1, *cfg.trace_stride);
  else ro.trace_stride = static_cast<std::size_t>(std::max<std::uint64_t>(1, ro.max_iters / kAutoTraceRows));
  const RunResult res = run(inst, to_double(x0q), plan, ro);
  if (!cfg.trace.empty()) write_file(cfg.trace, trace_to_csv(res.trace));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  out << "mode: " << to_string(mode) << "\n";
  if (cfg.h == "auto" && mode == Mode::Directed) {
    out << "regime: " << to_string(plan.regime) << "\n";
    out << "alpha0: " << to_fraction(plan.alpha0) << "\n";
    if (plan.phase1_steps) out << "phase1: " << plan.phase1_steps << " steps of h=" << num(plan.phase1_h) << "\n";
    out << "phase2: h=" << num(plan.phase2_h) << ", k=" << plan.phase2_steps << "\n";
  }
  out << "h: " << num(plan.h) << "\n";
  out << "verdict: " << to_string(res.verdict) << "\n";
  out << "iterations: " << res.iterations << "\n";
  out << "final_cost: " << num(res.final_cost) << "\n";
  out << "final_residual: " << num(res.final_residual) << "\n";
  if (res.final_dist) out << "final_dist: " << num(*res.final_dist) << "\n";
  if (rep) out << "opt: " << to_fraction(rep->opt) << "\n";
  if (res.clamped) out << "clamped: true\n";
  out << "x: " << vec_str(res.state.x) << "\n";
  out << "wall_time_s: " << num(wall) << "\n";
  switch (res.verdict) {
    case Verdict::Converged:
      return kExitOk;
    case Verdict::IterationCap:
      return kExitIterationCap;
    default:
      return kExitFailure;
  }
}

int cmd_solve(const SolveConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.mode == "undirected-continuous") return solve_continuous(cfg, out, err);
  return solve_discrete(cfg, out, err);
}

int cmd_oracle(const std::string& path, const std::string& mode, std::ostream& out) {
  std::optional<Mode> m;
  if (!mode.empty()) m = parse_mode(mode);
  const LpInstance inst = load_valid(path, m);
  out << report_to_json(enumerate_bfs(inst));
  return kExitOk;
}

int cmd_constants(const std::string& path, std::ostream& out) {
  const LpInstance inst = load_valid(path, std::nullopt);
  const InstanceConstants k = compute_constants(inst, start_point(inst));
  json exact, approx;
  const std::vector<std::pair<const char*, Rational>> fields = {
      {"gamma_A", Rational(k.gamma_A)}, {"D", k.D}, {"D_S", k.D_S}, {"c_min", k.c_min}, {"c_max", k.c_max},
      {"h0", k.h0}, {"Psi0", k.Psi0}, {"C1", k.C1}, {"C2", k.C2}, {"C3", k.C3}, {"rho_A", k.rho_A}};
  for (const auto& [name, v] : fields) {
    exact[name] = to_fraction(v);
    approx[name] = rounded(to_double(v));
  }
  json j;
  j["n"] = inst.n();
  j["m"] = inst.m();
  j["dropped_rows"] = inst.dropped_rows;
  j["exact"] = exact;
  j["approx"] = approx;
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_precondition(const std::string& path, const std::string& out_path, std::ostream& out) {
  const LpInstance inst = load_valid(path, std::nullopt);
  const Preconditioned pre = precondition(inst, start_point(inst));
  const std::string text = instance_to_json(pre.extended);
  if (!out_path.empty()) write_file(out_path, text);
  json j;
  j["c_prime"] = to_fraction(pre.c_prime);
  j["z0"] = to_fraction(pre.z0);
  j["x0"] = fractions(pre.x0);
  if (out_path.empty()) j["instance"] = json::parse(text);
  out << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_lowerbound(const std::string& opt_s, const std::string& phi_s, double h, double eps, std::size_t every,
                   std::ostream& out) {
  const Rational opt = parse_rational(opt_s), phi = parse_rational(phi_s);
  if (opt <= 0 || phi <= 0) throw Error(ErrorKind::InvalidArgument, "opt and phi must be positive");
  if (!(h > 0 && h <= 0.5)) throw Error(ErrorKind::InvalidArgument, "h must lie in (0, 1/2]");
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const LpInstance inst = validate(thm_one_instance(opt, phi));
  const MinEnergySolver solver(inst);
  const double o = to_double(opt), p = to_double(phi);
  const double k_lb = 1 / (2 * h) * std::max(o / p, 1.0) * std::log(2 / eps);
  const double rate = 2 * h * p / (o + p);

  CapacityState s{to_double(*inst.x0), 0, 0};
  bool envelope_ok = true;
  double drift = 0;
  const std::uint64_t cap = 100'000'000;
  if (every) out << "k,x1,x2,envelope\n";
  while (!(s.x[1] <= eps) && s.index < cap) {
    const double env = 0.5 * std::exp(-rate * static_cast<double>(s.index));
    envelope_ok = envelope_ok && s.x[1] >= env;
    drift = std::max(drift, std::abs(s.x[0] + s.x[1] - 1));
    if (every && s.index % every == 0)
      out << s.index << "," << num(s.x[0]) << "," << num(s.x[1]) << "," << num(env) << "\n";
    s = step_directed(solver, s, h);
  }
  const std::uint64_t k_obs = s.index;
  if (every) out << k_obs << "," << num(s.x[0]) << "," << num(s.x[1]) << "," << num(0.5 * std::exp(-rate * static_cast<double>(k_obs))) << "\n";
  const bool applies = eps < 1;
  const bool holds = static_cast<double>(k_obs) >= k_lb;
  out << "opt: " << to_fraction(opt) << "\n";
  out << "phi: " << to_fraction(phi) << "\n";
  out << "h: " << num(h) << "\n";
  out << "eps: " << num(eps) << "\n";
  out << "k_lower_bound: " << num(k_lb) << "\n";
  out << "k_observed: " << k_obs << "\n";
  out << "sum_drift: " << num(drift) << "\n";
  out << "envelope_holds: " << (envelope_ok ? "true" : "false") << "\n";
  if (!applies) {
    out << "bound_applies: false (eps outside (0, 1))\n";
    return kExitOk;
  }
  out << "bound_holds: " << (holds ? "true" : "false") << "\n";
  return holds && envelope_ok ? kExitOk : kExitFailure;
}

int cmd_check(const std::string& path, const std::string& trace_path, const CheckOptions& co, std::ostream& out) {
  std::vector<CheckResult> results;
  if (!path.empty()) {
    const LpInstance inst = load_valid(path, std::nullopt);
    results = run_instance_checks(inst, co);
  }
  if (!trace_path.empty()) results.push_back(check_residual_geometry(parse_trace_csv(read_file(trace_path))));
  if (results.empty()) throw Error(ErrorKind::InvalidArgument, "check needs --instance or --trace");
  out << checks_to_json(results);
  const bool ok = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Physarum dynamics for linear programs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  SolveConfig sc;
  auto* solve = app.add_subcommand("solve", "Run the dynamics on an instance");
  solve->add_option("--instance", sc.instance, "Instance JSON")->required();
  solve->add_option("--mode", sc.mode, "directed | undirected | undirected-continuous (default: instance mode)")
      ->check(CLI::IsMember({"directed", "undirected", "undirected-continuous"}));
  solve->add_option("--h", sc.h, "Step size: auto or a decimal in (0, 1)");
  solve->add_option("--eps", sc.eps, "Target accuracy in (0, 1)");
  solve->add_option("--max-iters", sc.max_iters, "Iteration cap (auto plans default to the plan length)");
  solve->add_option("--trace", sc.trace, "Trace CSV output path");
  solve->add_option("--trace-stride", sc.trace_stride, "Record every k-th iteration (default: about 1e5 rows in total)");
  solve->add_flag("--no-oracle", sc.no_oracle, "Skip basic-solution enumeration");
  solve->add_flag("--use-oracle-phi", sc.use_oracle_phi, "Plan with the oracle's Phi/opt instead of 1/C3");
  solve->add_option("--T", sc.T, "Horizon for the continuous dynamics");
  solve->add_option("--dt", sc.dt, "Integrator step for the continuous dynamics");
  solve->add_option("--integrator", sc.integrator, "rk4 | euler")->check(CLI::IsMember({"rk4", "euler"}));
  solve->add_option("--sample-every", sc.sample_every, "Continuous trace sampling interval in steps");

  std::string oracle_path, oracle_mode;
  auto* oracle = app.add_subcommand("oracle", "Enumerate basic solutions and print opt, Phi and the optimal set");
  oracle->add_option("--instance", oracle_path, "Instance JSON")->required();
  oracle->add_option("--mode", oracle_mode, "directed | undirected")->check(CLI::IsMember({"directed", "undirected"}));

  std::string const_path;
  auto* constants = app.add_subcommand("constants", "Print the instance constants");
  constants->add_option("--instance", const_path, "Instance JSON")->required();

  std::string pre_path, pre_out;
  auto* pre = app.add_subcommand("precondition", "Append the demand column and a dominating start");
  pre->add_option("--instance", pre_path, "Instance JSON")->required();
  pre->add_option("--out", pre_out, "Write the extended instance here");

  std::string lb_opt = "1", lb_phi = "1";
  double lb_h = 0.1, lb_eps = 0.01;
  std::size_t lb_every = 0;
  auto* lower = app.add_subcommand("lowerbound", "Replay the two-column lower-bound instance");
  lower->add_option("--opt", lb_opt, "opt > 0 (decimal or fraction)");
  lower->add_option("--phi", lb_phi, "Phi > 0 (decimal or fraction)");
  lower->add_option("--h", lb_h, "Step size in (0, 1/2]");
  lower->add_option("--eps", lb_eps, "Target for x2");
  lower->add_option("--table-every", lb_every, "Print every k-th iterate as CSV (0: none)");

  GeneratorSpec gs;
  std::string gen_kind = "shortest_path", gen_mode = "directed", gen_opt = "1", gen_phi = "1", gen_out;
  auto* gen = app.add_subcommand("generate", "Emit an instance");
  gen->add_option("--kind", gen_kind, "shortest_path | transshipment | random_positive_lp | thm_one | zero_cost_demo");
  gen->add_option("--seed", gs.seed, "64-bit seed");
  gen->add_option("--mode", gen_mode, "directed | undirected")->check(CLI::IsMember({"directed", "undirected"}));
  gen->add_option("--nodes", gs.nodes);
  gen->add_option("--arcs", gs.arcs);
  gen->add_option("--rows", gs.rows);
  gen->add_option("--cols", gs.cols);
  gen->add_option("--max-entry", gs.max_entry);
  gen->add_option("--max-demand", gs.max_demand);
  gen->add_option("--max-cost", gs.max_cost);
  gen->add_option("--opt", gen_opt);
  gen->add_option("--phi", gen_phi);
  gen->add_option("--out", gen_out, "Output path (default: stdout)");

  std::string chk_path, chk_trace;
  CheckOptions co;
  auto* check = app.add_subcommand("check", "Run the invariant suites; JSON summary");
  check->add_option("--instance", chk_path, "Instance JSON");
  check->add_option("--trace", chk_trace, "Trace CSV to test for geometric residual decay");
  check->add_option("--seed", co.seed);
  check->add_option("--samples", co.samples);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*solve) return cmd_solve(sc, out, err);
    if (*oracle) return cmd_oracle(oracle_path, oracle_mode, out);
    if (*constants) return cmd_constants(const_path, out);
    if (*pre) return cmd_precondition(pre_path, pre_out, out);
    if (*lower) return cmd_lowerbound(lb_opt, lb_phi, lb_h, lb_eps, lb_every, out);
    if (*gen) {
      gs.kind = parse_generator_kind(gen_kind);
      gs.mode = parse_mode(gen_mode);
      gs.opt = parse_rational(gen_opt);
      gs.phi = parse_rational(gen_phi);
      const std::string text = instance_to_json(generate(gs));
      if (gen_out.empty())
        out << text;
      else
        write_file(gen_out, text);
      return kExitOk;
    }
    if (*check) return cmd_check(chk_path, chk_trace, co, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"physarum"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace physarum::cli
