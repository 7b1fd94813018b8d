#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "physarum/lp_model.hpp"

namespace physarum {

struct BasicSolution {
  std::vector<std::size_t> basis;
  VecQ values;
  Rational cost;  // cᵀ|f|
  bool feasible_directed = false;
  bool is_optimal = false;
};

struct OracleReport {
  Mode mode = Mode::Directed;
  // Directed: basic solutions with f >= 0. Undirected: every basic solution.
  std::vector<BasicSolution> all_bfs;
  Rational opt;
  // Unset when every feasible basic solution is optimal.
  std::optional<Rational> phi;
  std::vector<std::size_t> optimal;      // indices into all_bfs
  std::vector<std::size_t> non_optimal;  // indices into all_bfs

  std::vector<BasicSolution> optimal_set() const;
};

// Every distinct solution of A_B f_B = b over invertible bases B, any sign.
// Throws SizeCap when C(m, n) exceeds size_cap(kEnumerationCap).
std::vector<BasicSolution> basic_solutions(const LpInstance& inst);

// Uses inst.mode. Throws Infeasible when no feasible basic solution exists.
OracleReport enumerate_bfs(const LpInstance& inst);
OracleReport enumerate_bfs(const LpInstance& inst, Mode mode);

// min over optimal basic solutions f* of ‖x − |f*|‖∞. When the optimal face is
// larger than a point this overestimates the true distance.
double dist_to_opt(const OracleReport& report, const VecD& x);
Rational dist_to_opt_exact(const OracleReport& report, const VecQ& x);

std::string report_to_json(const OracleReport& report, int indent = 2);

// v_e ≠ 0 implies v_e·f_e > 0.
bool sign_compatible(const VecQ& v, const VecQ& f);

struct Decomposition {
  std::vector<Rational> lambda;
  std::vector<VecQ> vertices;
  VecQ kernel;  // w with A w = 0
};

// f = Σ λ_i v_i + w with Σ λ_i = 1, every term sign-compatible with f.
// Greedy: each round takes the basic solution allowing the largest weight.
Decomposition decompose(const LpInstance& inst, const VecQ& f);
Decomposition decompose(const LpInstance& inst, const VecQ& f, const std::vector<BasicSolution>& pool);

// Minimal-support kernel vectors of A, one per support, first nonzero entry 1.
std::vector<VecQ> circuits(const MatrixQ& A);

// Writes w ∈ ker(A) as a nonnegative combination of circuits sign-compatible
// with w. Returns the (coefficient, circuit) pairs.
std::vector<std::pair<Rational, VecQ>> conformal_circuits(const MatrixQ& A, const VecQ& w);

// Feasible f, sign-compatible with g, zero on S, close to g. When p is given,
// S is enlarged by {e : g_e <= 0 or A_eᵀp <= 0} and f comes out non-negative
// and kernel-free. Throws PreconditionViolated unless Σ_S |g_e| < 1/ρ_A.
VecQ round_to_kernel_free(const LpInstance& inst, const VecQ& g, std::vector<std::size_t> S,
                          const std::optional<VecQ>& p = std::nullopt);

struct OptimalityCheck {
  bool kernel_free = false;
  bool hypothesis = false;  // every non-optimal g has e with g_e > 0, f_e < threshold
  bool conclusion = false;  // ‖f − f*‖∞ < ε/(Dγ_A)
  Rational threshold;       // ε/(2mD³γ_A‖b‖₁)
  Rational bound;           // ε/(Dγ_A)
  Rational distance;
  VecQ nearest_optimal;
};

OptimalityCheck check_optimality_criterion(const LpInstance& inst, const OracleReport& report, const VecQ& f,
                                           const Rational& eps);

}  // namespace physarum
