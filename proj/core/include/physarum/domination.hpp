#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "physarum/lp_model.hpp"

namespace physarum {

struct DualVertex {
  VecQ y;
  // max{0, Aᵀy} in directed mode, |Aᵀy| in undirected mode.
  VecQ d;
  VecQ Aty;
};

/* Directed: bᵀy = 1. Undirected: bᵀy = -1. Each y solves bᵀy = ±1 together
 * with A_Sᵀy = 0 for some set S of n-1 columns, which are exactly the vertices
 * of {(y, z) : bᵀy = ±1, z ≥ Aᵀy, z ≥ 0 (resp. z ≥ -Aᵀy)}. */
struct DualVertexSet {
  Mode mode = Mode::Directed;
  std::vector<DualVertex> vertices;
};

// Throws SizeCap when C(m, n-1) exceeds size_cap(kEnumerationCap).
DualVertexSet enumerate_dual_vertices(const LpInstance& inst, Mode mode);

// n+m linearly independent tight constraints at (y, d).
bool is_dual_vertex(const LpInstance& inst, const DualVertex& v, Mode mode);

struct CapacityFlow {
  Rational t;  // max{t : A f = t b, 0 ≤ f ≤ x} (directed) or |f| ≤ x (undirected)
  VecQ f;
};

// Brute-force over the vertices of the primal polytope.
CapacityFlow max_capacity_flow(const LpInstance& inst, const VecQ& x, Mode mode);

struct DominationCertificate {
  // Directed: min_y yᵀAx. Undirected: min_d dᵀx (C_opt).
  Rational alpha;
  std::size_t argmin = 0;
  VecQ y;
  // A f = α b with 0 ≤ f ≤ x (directed) or |f| ≤ x (undirected). Empty when
  // α ≤ 0.
  VecQ witness;
};

DominationCertificate alpha_of(const LpInstance& inst, const DualVertexSet& Y, const VecQ& x);

// Float evaluation of the same minimum, for traces.
double alpha_value(const DualVertexSet& Y, const VecD& x);

struct Preconditioned {
  LpInstance extended;  // A' = [A | b], c' = (c, 2C₁)
  VecQ x0;              // (x0, z₀)
  Rational z0;
  Rational c_prime;
};

// z₀ = 1 + D_S ‖x0‖∞ ‖A‖₁ ‖b‖₁ with ‖A‖₁ = Σ|A_ij|.
Preconditioned precondition(const LpInstance& inst, const VecQ& x0);

}  // namespace physarum
