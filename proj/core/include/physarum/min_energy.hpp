#pragma once

#include <cstddef>
#include <vector>

#include "physarum/lp_model.hpp"

namespace physarum {

struct MinEnergySolution {
  VecD q;
  VecD p;
  double energy = 0;
  // Some x_e was below kMinCapacity and got raised before forming R.
  bool clamped = false;
};

struct ExactMinEnergySolution {
  VecQ q;
  VecQ p;
  Rational energy;
};

inline constexpr double kMinCapacity = 1e-300;

/* Split of the columns into Z = {c_e = 0} and P, with the rows of A permuted
 * so that the top |Z| rows of A_Z (A'_Z) are invertible. Everything here is
 * exact. */
struct ZeroCostBlocks {
  std::vector<std::size_t> Z;
  std::vector<std::size_t> P;
  std::vector<std::size_t> row_perm;
  MatrixQ AZ1;  // A'_Z
  MatrixQ AZ2;  // A''_Z
  MatrixQ AP1;  // A'_P
  MatrixQ AP2;  // A''_P
  MatrixQ AZ1_inv;
  MatrixQ M;    // A''_P - A''_Z (A'_Z)^{-1} A'_P
  VecQ b1;
  VecQ b2;
  VecQ rhs;     // b'' - A''_Z (A'_Z)^{-1} b'
};

// Throws KernelCostViolation when A_Z has dependent columns.
ZeroCostBlocks zero_cost_blocks(const LpInstance& inst);

// Requires c > 0 and x > 0.
MinEnergySolution solve_positive(const LpInstance& inst, const VecD& x);

// Handles zero-cost columns through the Schur complement. With no zero-cost
// column it is the same computation as solve_positive.
MinEnergySolution solve_general(const LpInstance& inst, const VecD& x);

ExactMinEnergySolution solve_general_exact(const LpInstance& inst, const VecQ& x);

// Σ (c_e/x_e) f_e², +inf when f_e ≠ 0 on a column with x_e = 0.
double energy(const LpInstance& inst, const VecD& x, const VecD& f);
Rational energy_exact(const LpInstance& inst, const VecQ& x, const VecQ& f);

// Caches the zero-cost factorization for repeated solves on one instance.
class MinEnergySolver {
 public:
  explicit MinEnergySolver(const LpInstance& inst);

  MinEnergySolution solve(const VecD& x) const;
  const LpInstance& instance() const { return inst_; }
  const ZeroCostBlocks& blocks() const { return blocks_; }

 private:
  LpInstance inst_;
  ZeroCostBlocks blocks_;
  MatrixD A_;
  VecD b_;
  VecD c_;
  MatrixD AP1_;
  MatrixD AZ1_inv_;
  MatrixD G_;  // -(A'_Z)^{-T} (A''_Z)^T
  MatrixD M_;
  VecD b1_;
  VecD rhs_;
};

}  // namespace physarum
