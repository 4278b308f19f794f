#pragma once

// Exact linear algebra over the field of rational functions.

#include <optional>
#include <vector>

#include "bilag/symexpr.hpp"

namespace bilag {

using Vector = std::vector<ScalarExpr>;
/// Row-major; `m[i][j]` is row i, column j.
using Matrix = std::vector<std::vector<ScalarExpr>>;

Matrix identity_matrix(std::size_t n);
Matrix transpose(const Matrix& m);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, const Vector& v);

ScalarExpr determinant(const Matrix& m);
std::size_t rank(const Matrix& m);

/// Unique solution of m x = b for square m. Throws DomainError when m is
/// singular.
Vector solve(const Matrix& m, const Vector& b);

/// Solution of m x = b for an m-by-k matrix of full column rank, or nullopt
/// when b is not in the column span. Throws DomainError when the columns are
/// dependent.
std::optional<Vector> solve_in_span(const Matrix& m, const Vector& b);

Matrix inverse(const Matrix& m);

}  // namespace bilag
