#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "physarum/domination.hpp"
#include "physarum/lp_model.hpp"
#include "physarum/min_energy.hpp"
#include "physarum/oracle.hpp"
#include "physarum/trace.hpp"

namespace physarum {

struct CapacityState {
  VecD x;
  std::uint64_t index = 0;
  double time = 0;
};

// x' = (1-h)x + hq. Throws NonPositiveCapacity if some x'_e <= 0.
CapacityState step_directed(const MinEnergySolver& solver, const CapacityState& s, double h);
// x' = (1-h)x + h|q|.
CapacityState step_undirected(const MinEnergySolver& solver, const CapacityState& s, double h);

// The same updates with q supplied by the caller.
CapacityState blend(const CapacityState& s, const VecD& q, double h, bool absolute);

enum class Integrator { Euler, RK4 };

struct ContinuousOptions {
  double T = 30;
  double dt = 1e-3;
  Integrator method = Integrator::RK4;
  std::size_t sample_every = 1;
  bool check_envelope = true;
  double envelope_tol = 1e-3;
};

struct ContinuousSample {
  double t = 0;
  VecD x;
};

struct ContinuousResult {
  std::vector<ContinuousSample> samples;  // includes t = 0 and t = T
  double max_envelope_violation = 0;      // largest excess outside the envelope
  bool envelope_checked = false;
  bool clamped = false;
};

// ẋ = |q| − x. With check_envelope, every step is tested against
//   x(0)e^{-t} − tol ≤ x(t) ≤ B + max(0, x(0) − B)e^{-t} + tol,  B = D‖b/γ_A‖₁,
// and EnvelopeViolation is thrown on the first miss.
ContinuousResult integrate_continuous(const LpInstance& inst, const VecD& x0, const ContinuousOptions& opt);

enum class Regime { Feasible, Low, High, Tiny, Huge };
std::string to_string(Regime r);

struct StepPlan {
  Regime regime = Regime::Feasible;
  double h = 0;  // step allowed in the starting regime
  std::uint64_t phase1_steps = 0;
  double phase1_h = 0;
  double phase2_h = 0;
  std::uint64_t phase2_steps = 0;  // saturates at UINT64_MAX
  Rational phi_over_opt;
  Rational phi;
  Rational alpha0;

  double step_at(std::uint64_t k) const { return k < phase1_steps ? phase1_h : phase2_h; }
  std::uint64_t total_steps() const;

  static StepPlan fixed(double h);
};

// phi_over_opt defaults to 1/C₃, phi to 1/(Dγ_A)². Throws NotStronglyDominating
// when alpha0 <= 0.
StepPlan plan_steps(const LpInstance& inst, const InstanceConstants& k, const VecQ& x0, const Rational& alpha0,
                    const std::optional<Rational>& phi_over_opt, const std::optional<Rational>& phi, double eps);

enum class DiscreteKind { Directed, Undirected };

enum class Verdict { Converged, IterationCap, Diverged };
std::string to_string(Verdict v);

struct RunOptions {
  DiscreteKind kind = DiscreteKind::Directed;
  double eps = 1e-3;
  std::uint64_t max_iters = 1'000'000;
  const OracleReport* oracle = nullptr;  // enables dist_inf and the distance stopping rule
  const DualVertexSet* Y = nullptr;      // enables the alpha column
  std::size_t trace_stride = 1;          // 0 keeps no trace
};

struct RunResult {
  Verdict verdict = Verdict::IterationCap;
  CapacityState state;
  std::vector<TraceRecord> trace;
  std::uint64_t iterations = 0;
  double final_cost = 0;
  double final_residual = 0;
  std::optional<double> final_dist;
  bool clamped = false;
};

/* Stops when dist_inf < eps/(Dγ_A) (oracle given) or, without an oracle, when
 * max(‖b − Ax‖∞, ‖x − q‖∞) < eps, using |q| in undirected mode. Diverged when
 * ‖x‖∞ > 10·Ψ⁽⁰⁾. */
RunResult run(const LpInstance& inst, const VecD& x0, const StepPlan& plan, const RunOptions& opt);

struct LyapunovReport {
  std::vector<double> C_d;
  double C_opt = 0;
  double V = 0;
  double h = 0;
  bool h_nonpositive = false;  // h ≤ 1e-9
};

LyapunovReport lyapunov_report(const LpInstance& inst, const VecD& x, const DualVertexSet& Y);
LyapunovReport lyapunov_report(const MinEnergySolver& solver, const VecD& x, const DualVertexSet& Y);

}  // namespace physarum
