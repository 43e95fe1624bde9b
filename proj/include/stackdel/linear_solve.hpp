#pragma once

#include <cmath>
#include <type_traits>
#include <utility>
#include <vector>

#include "stackdel/error.hpp"

namespace stackdel {

/// Dense Gaussian elimination with back substitution. Exact scalar types
/// pivot on the first nonzero entry (zero tests are exact); floating types
/// use partial pivoting on magnitude.
template <class T>
std::vector<T> solve_linear_system(std::vector<std::vector<T>> matrix, std::vector<T> rhs) {
  const size_t n = rhs.size();
  if (matrix.size() != n) fail(ErrorCode::kLengthMismatch, "matrix/right-hand side size mismatch");
  for (const auto& row : matrix)
    if (row.size() != n) fail(ErrorCode::kLengthMismatch, "matrix is not square");

  for (size_t col = 0; col < n; ++col) {
    size_t pivot = n;
    if constexpr (std::is_floating_point_v<T>) {
      T best = 0;
      for (size_t r = col; r < n; ++r)
        if (std::abs(matrix[r][col]) > best) {
          best = std::abs(matrix[r][col]);
          pivot = r;
        }
    } else {
      for (size_t r = col; r < n && pivot == n; ++r)
        if (matrix[r][col] != 0) pivot = r;
    }
    if (pivot == n) fail(ErrorCode::kSingularSystem, "singular system at column " + std::to_string(col));
    std::swap(matrix[col], matrix[pivot]);
    std::swap(rhs[col], rhs[pivot]);

    for (size_t r = col + 1; r < n; ++r) {
      if (matrix[r][col] == 0) continue;
      T factor = matrix[r][col] / matrix[col][col];
      for (size_t k = col; k < n; ++k) matrix[r][k] -= factor * matrix[col][k];
      rhs[r] -= factor * rhs[col];
    }
  }

  std::vector<T> x(n);
  for (size_t i = n; i-- > 0;) {
    T acc = rhs[i];
    for (size_t k = i + 1; k < n; ++k) acc -= matrix[i][k] * x[k];
    x[i] = acc / matrix[i][i];
  }
  return x;
}

}  // namespace stackdel
