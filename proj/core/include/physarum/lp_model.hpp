#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "physarum/matrix.hpp"
#include "physarum/rational.hpp"

namespace physarum {

enum class Mode { Directed, Undirected };

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct DeterminantInfo {
  Integer gamma_A;
  // max |det| over (n-1)- and n-dimensional square submatrices of A/γ_A
  Rational D;
  // max |det| over all square submatrices of A
  Rational D_S;
  std::uint64_t evaluations = 0;
};

struct LpInstance {
  MatrixQ A;
  VecQ b;
  VecQ c;
  Mode mode = Mode::Directed;
  std::optional<VecQ> x0;
  // Set by validate(). Row indices of the raw input that were dropped.
  std::vector<std::size_t> dropped_rows;
  // Cached by validate() when within the enumeration cap.
  std::shared_ptr<const DeterminantInfo> det_info;

  std::size_t n() const { return A.rows(); }
  std::size_t m() const { return A.cols(); }
};

// Checks costs, drops linearly dependent rows, checks the shape and the
// kernel-cost condition, rejects b = 0, and caches determinant data.
LpInstance validate(LpInstance raw);

// Throws SizeCap when the number of determinant evaluations would exceed
// size_cap(kDeterminantCap).
DeterminantInfo determinant_info(const MatrixQ& A);

const DeterminantInfo& require_det_info(const LpInstance& inst);

struct InstanceConstants {
  Integer gamma_A;
  Rational D;
  Rational D_S;
  Rational c_min;
  Rational c_max;
  Rational h0;
  Rational Psi0;
  Rational C1;
  Rational C2;
  Rational C3;
  Rational rho_A;

  Rational b_over_gamma_l1;  // ‖b/γ_A‖₁
  Rational b_l1;
  Rational c_l1;
  Rational A_max;  // max |A_ij|
  Rational A_sum;  // Σ |A_ij|
};

InstanceConstants compute_constants(const LpInstance& inst, const VecQ& x0);

// Positive-cost minimum; c_min ignores zero-cost columns.
Rational min_positive_cost(const VecQ& c);

}  // namespace physarum
