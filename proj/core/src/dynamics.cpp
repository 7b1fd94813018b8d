#include "physarum/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "physarum/errors.hpp"
#include "physarum/linalg.hpp"

namespace physarum {

CapacityState blend(const CapacityState& s, const VecD& q, double h, bool absolute) {
  CapacityState out;
  out.x.resize(s.x.size());
  for (std::size_t e = 0; e < s.x.size(); ++e) out.x[e] = (1 - h) * s.x[e] + h * (absolute ? std::abs(q[e]) : q[e]);
  out.index = s.index + 1;
  out.time = s.time + h;
  return out;
}

namespace {

void check_step(double h) {
  if (!(h > 0 && h < 1)) throw Error(ErrorKind::InvalidArgument, "step size must lie in (0, 1)");
}

}  // namespace

CapacityState step_directed(const MinEnergySolver& solver, const CapacityState& s, double h) {
  check_step(h);
  const auto sol = solver.solve(s.x);
  CapacityState out = blend(s, sol.q, h, false);
  for (std::size_t e = 0; e < out.x.size(); ++e)
    if (!(out.x[e] > 0))
      throw Error(ErrorKind::NonPositiveCapacity, "x_" + std::to_string(e) + " = " + format_number(out.x[e]) + " after step");
  return out;
}

CapacityState step_undirected(const MinEnergySolver& solver, const CapacityState& s, double h) {
  check_step(h);
  const auto sol = solver.solve(s.x);
  return blend(s, sol.q, h, true);
}

ContinuousResult integrate_continuous(const LpInstance& inst, const VecD& x0, const ContinuousOptions& opt) {
  if (!(opt.dt > 0 && opt.dt <= 1e-2)) throw Error(ErrorKind::InvalidArgument, "dt must lie in (0, 1e-2]");
  if (!(opt.T >= 0)) throw Error(ErrorKind::InvalidArgument, "T must be non-negative");
  for (double v : x0)
    if (!(v > 0)) throw Error(ErrorKind::NonPositiveCapacity, "x0 must be positive");
  const MinEnergySolver solver(inst);
  const std::size_t m = inst.m();

  ContinuousResult res;
  double B = 0;
  if (opt.check_envelope && inst.det_info) {
    res.envelope_checked = true;
    B = to_double(inst.det_info->D * norm_1(inst.b) / Rational(inst.det_info->gamma_A));
  }

  auto rhs = [&](const VecD& x) {
    VecD xc = x;
    for (auto& v : xc)
      if (!(v > kMinCapacity)) {
        v = kMinCapacity;
        res.clamped = true;
      }
    const auto sol = solver.solve(xc);
    res.clamped = res.clamped || sol.clamped;
    VecD d(m);
    for (std::size_t e = 0; e < m; ++e) d[e] = std::abs(sol.q[e]) - x[e];
    return d;
  };
  auto envelope = [&](double t, const VecD& x) {
    if (!res.envelope_checked) return;
    const double decay = std::exp(-t);
    for (std::size_t e = 0; e < m; ++e) {
      const double lo = x0[e] * decay;
      const double hi = B + std::max(0.0, x0[e] - B) * decay;
      const double miss = std::max(lo - x[e], x[e] - hi);
      res.max_envelope_violation = std::max(res.max_envelope_violation, miss);
      if (miss > opt.envelope_tol)
        throw Error(ErrorKind::EnvelopeViolation,
                    "x_" + std::to_string(e) + "(" + format_number(t) + ") = " + format_number(x[e]) + " outside [" +
                        format_number(lo) + ", " + format_number(hi) + "]");
    }
  };

  const auto steps = static_cast<std::uint64_t>(std::ceil(opt.T / opt.dt - 1e-9));
  const std::size_t every = std::max<std::size_t>(1, opt.sample_every);
  VecD x = x0;
  double t = 0;
  res.samples.push_back({0.0, x});
  for (std::uint64_t k = 0; k < steps; ++k) {
    const double dt = std::min(opt.dt, opt.T - t);
    if (opt.method == Integrator::Euler) {
      const VecD d = rhs(x);
      for (std::size_t e = 0; e < m; ++e) x[e] += dt * d[e];
    } else {
      const VecD k1 = rhs(x);
      VecD tmp(m);
      for (std::size_t e = 0; e < m; ++e) tmp[e] = x[e] + 0.5 * dt * k1[e];
      const VecD k2 = rhs(tmp);
      for (std::size_t e = 0; e < m; ++e) tmp[e] = x[e] + 0.5 * dt * k2[e];
      const VecD k3 = rhs(tmp);
      for (std::size_t e = 0; e < m; ++e) tmp[e] = x[e] + dt * k3[e];
      const VecD k4 = rhs(tmp);
      for (std::size_t e = 0; e < m; ++e) x[e] += dt / 6 * (k1[e] + 2 * k2[e] + 2 * k3[e] + k4[e]);
    }
    t = (k + 1 == steps) ? opt.T : t + dt;
    envelope(t, x);
    if ((k + 1) % every == 0 || k + 1 == steps) res.samples.push_back({t, x});
  }
  return res;
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Feasible: return "feasible";
    case Regime::Low: return "low";
    case Regime::High: return "high";
    case Regime::Tiny: return "tiny";
    case Regime::Huge: return "huge";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::IterationCap: return "IterationCap";
    case Verdict::Diverged: return "Diverged";
  }
  return "unknown";
}

namespace {

std::uint64_t ceil_count(double v) {
  if (!(v > 0)) return 0;
  if (v >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

std::uint64_t StepPlan::total_steps() const {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  return phase2_steps > max - phase1_steps ? max : phase1_steps + phase2_steps;
}

StepPlan StepPlan::fixed(double h) {
  StepPlan p;
  p.h = h;
  p.phase2_h = h;
  p.phase2_steps = std::numeric_limits<std::uint64_t>::max();
  return p;
}

StepPlan plan_steps(const LpInstance& inst, const InstanceConstants& k, const VecQ& x0, const Rational& alpha0,
                    const std::optional<Rational>& phi_over_opt, const std::optional<Rational>& phi, double eps) {
  (void)inst;
  if (alpha0 <= 0) throw Error(ErrorKind::NotStronglyDominating, "alpha0 = " + to_fraction(alpha0));
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  StepPlan p;
  p.alpha0 = alpha0;
  p.phi_over_opt = phi_over_opt.value_or(Rational(1) / k.C3);
  const Rational dg = k.D * Rational(k.gamma_A);
  p.phi = phi.value_or(Rational(1) / (dg * dg));
  const double h0 = to_double(k.h0);
  const double ratio = to_double(p.phi_over_opt);

  if (alpha0 == 1) {
    p.regime = Regime::Feasible;
    p.h = h0;
  } else if (alpha0 >= Rational(1, 2) && alpha0 < 1) {
    p.regime = Regime::Low;
    p.h = h0 / 2;
  } else if (alpha0 > 1 && alpha0 <= 1 / k.h0) {
    p.regime = Regime::High;
    p.h = h0;
  } else if (alpha0 < Rational(1, 2)) {
    p.regime = Regime::Tiny;
    const Rational ah = alpha0 * k.h0;
    const Rational hq = p.phi_over_opt * ah * ah;
    p.phase1_h = to_double(hq);
    const Rational inv = 1 / hq;
    Integer steps;
    mpz_cdiv_q(steps.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
    p.phase1_steps = steps.fits_ulong_p() ? steps.get_ui() : std::numeric_limits<std::uint64_t>::max();
    p.h = p.phase1_h;
  } else {
    p.regime = Regime::Huge;
    p.phase1_h = std::min(ratio, 0.25);
    const double target = to_double(k.h0 * (alpha0 - 1) / (1 - k.h0));
    p.phase1_steps = ceil_count(std::log(target) / -std::log1p(-p.phase1_h));
    p.h = p.phase1_h;
  }

  p.phase2_h = ratio * h0 * h0 / 2;
  double xmin = std::numeric_limits<double>::infinity();
  for (const auto& v : x0) xmin = std::min(xmin, to_double(v));
  const double arg = to_double(k.C2 * k.Psi0) / (eps * std::min(1.0, xmin));
  p.phase2_steps = ceil_count(4 * to_double(k.C1) / (p.phase2_h * to_double(p.phi)) * std::log(arg));
  return p;
}

RunResult run(const LpInstance& inst, const VecD& x0, const StepPlan& plan, const RunOptions& opt) {
  RunResult res;
  res.state.x = x0;
  if (opt.max_iters == 0) {
    res.verdict = Verdict::IterationCap;
    return res;
  }
  const MinEnergySolver solver(inst);
  const std::size_t m = inst.m();
  const MatrixD A = to_double(inst.A);
  const VecD b = to_double(inst.b), c = to_double(inst.c);
  const bool absolute = opt.kind == DiscreteKind::Undirected;

  double dist_tol = opt.eps;
  std::optional<double> psi_limit;
  if (inst.det_info) {
    dist_tol = opt.eps / to_double(inst.det_info->D * Rational(inst.det_info->gamma_A));
    const InstanceConstants k = compute_constants(inst, to_rational(x0));
    psi_limit = 10 * to_double(k.Psi0);
  }

  CapacityState s{x0, 0, 0};
  for (std::uint64_t it = 0;; ++it) {
    const auto sol = solver.solve(s.x);
    res.clamped = res.clamped || sol.clamped;
    TraceRecord r;
    r.iter = it;
    r.time = s.time;
    r.cost = dot(c, s.x);
    const VecD Ax = A * s.x;
    double fix = 0;
    for (std::size_t i = 0; i < Ax.size(); ++i) r.residual_inf = std::max(r.residual_inf, std::abs(b[i] - Ax[i]));
    for (std::size_t e = 0; e < m; ++e) fix = std::max(fix, std::abs(s.x[e] - (absolute ? std::abs(sol.q[e]) : sol.q[e])));
    r.energy = sol.energy;
    r.x_min = *std::min_element(s.x.begin(), s.x.end());
    r.x_max = *std::max_element(s.x.begin(), s.x.end());
    if (opt.Y) r.alpha = alpha_value(*opt.Y, s.x);
    if (opt.oracle) r.dist_inf = dist_to_opt(*opt.oracle, s.x);

    Verdict verdict = Verdict::IterationCap;
    bool stop = false;
    if (opt.oracle ? *r.dist_inf < dist_tol : std::max(r.residual_inf, fix) < opt.eps) {
      verdict = Verdict::Converged;
      stop = true;
    } else if (psi_limit && r.x_max > *psi_limit) {
      verdict = Verdict::Diverged;
      stop = true;
    } else if (it >= opt.max_iters) {
      stop = true;
    }
    if (opt.trace_stride && (it % opt.trace_stride == 0 || stop)) res.trace.push_back(r);
    if (stop) {
      res.verdict = verdict;
      res.state = s;
      res.iterations = it;
      res.final_cost = r.cost;
      res.final_residual = r.residual_inf;
      res.final_dist = r.dist_inf;
      return res;
    }
    const double h = plan.step_at(it);
    s = blend(s, sol.q, h, absolute);
    if (!absolute)
      for (std::size_t e = 0; e < m; ++e)
        if (!(s.x[e] > 0))
          throw Error(ErrorKind::NonPositiveCapacity, "x_" + std::to_string(e) + " = " + format_number(s.x[e]) + " after step " + std::to_string(it + 1));
  }
}

LyapunovReport lyapunov_report(const LpInstance& inst, const VecD& x, const DualVertexSet& Y) {
  return lyapunov_report(MinEnergySolver(inst), x, Y);
}

LyapunovReport lyapunov_report(const MinEnergySolver& solver, const VecD& x, const DualVertexSet& Y) {
  const LpInstance& inst = solver.instance();
  LyapunovReport rep;
  rep.C_opt = std::numeric_limits<double>::infinity();
  for (const auto& v : Y.vertices) {
    double s = 0;
    for (std::size_t e = 0; e < x.size(); ++e) s += to_double(v.d[e]) * x[e];
    rep.C_d.push_back(s);
    rep.C_opt = std::min(rep.C_opt, s);
  }
  const auto sol = solver.solve(x);
  double cx = 0, cq = 0;
  for (std::size_t e = 0; e < x.size(); ++e) {
    const double ce = to_double(inst.c[e]);
    cx += ce * x[e];
    cq += ce * std::abs(sol.q[e]);
  }
  rep.V = cx / rep.C_opt;
  rep.h = cq / rep.C_opt - cx / (rep.C_opt * rep.C_opt);
  rep.h_nonpositive = rep.h <= 1e-9;
  return rep;
}

}  // namespace physarum
