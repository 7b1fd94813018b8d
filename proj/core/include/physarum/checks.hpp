#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "physarum/lp_model.hpp"
#include "physarum/oracle.hpp"
#include "physarum/trace.hpp"

namespace physarum {

struct CheckResult {
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 7;
  std::size_t samples = 20;  // random capacity vectors per check
  std::size_t probes = 200;  // kernel perturbations per sample
  std::size_t steps = 100;   // dynamics steps
};

CheckResult check_determinants(const LpInstance& inst);
CheckResult check_constants(const LpInstance& inst);
CheckResult check_min_energy(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_zero_cost_limit(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_bfs_bounds(const LpInstance& inst, const OracleReport& report);
CheckResult check_phi_bound(const LpInstance& inst, const OracleReport& report);
CheckResult check_decompose(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_duality(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_dual_vertices(const LpInstance& inst);
CheckResult check_residual_geometry(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_alpha_recurrence(const LpInstance& inst, const CheckOptions& opt);
CheckResult check_uniform_bound(const LpInstance& inst, const CheckOptions& opt);

// r_k = ρ^k r_0 on a recorded trace, with ρ taken from the first two rows.
CheckResult check_residual_geometry(const std::vector<TraceRecord>& trace, double rel_tol = 1e-9);

std::vector<CheckResult> run_instance_checks(const LpInstance& inst, const CheckOptions& opt);

std::string checks_to_json(const std::vector<CheckResult>& results, int indent = 2);

// Strictly positive start with α ∈ [1/2, 3/2] built from the feasible basic
// solutions (directed mode).
VecQ dominating_start(const LpInstance& inst, const OracleReport& report);

}  // namespace physarum
