#pragma once

#include <cstddef>
#include <vector>

#include "physarum/matrix.hpp"

namespace physarum {

// Partial pivoting. Throws SingularMatrix when the best pivot in a column is
// below 1e-12 times the largest entry of M.
VecD solve_linear(const MatrixD& M, const VecD& rhs);

// Exact Gaussian elimination over the rationals.
VecQ solve_linear(const MatrixQ& M, const VecQ& rhs);

// Solves M X = B column by column, exactly.
MatrixQ solve_linear(const MatrixQ& M, const MatrixQ& B);

MatrixQ inverse(const MatrixQ& M);

struct BareissResult {
  Rational det;
  std::size_t rank = 0;
  // Leading entry of each elimination step, in order. For integer input every
  // value here is an integer.
  std::vector<Rational> pivots;
};

// Fraction-free elimination with row swaps. Works on any rectangular input;
// det is only meaningful for square matrices. The 0x0 determinant is 1.
BareissResult bareiss(const MatrixQ& M);

Rational determinant(const MatrixQ& M);
double determinant(const MatrixD& M);

std::size_t rank(const MatrixQ& M);

// Indices of a maximal linearly independent set of rows, chosen greedily in
// index order.
std::vector<std::size_t> independent_rows(const MatrixQ& M);
std::vector<std::size_t> independent_cols(const MatrixQ& M);

// Basis of {v : M v = 0}, one column per basis vector.
MatrixQ nullspace(const MatrixQ& M);

}  // namespace physarum
