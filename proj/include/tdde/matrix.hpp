#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tdde/errors.hpp"

namespace tdde {

// Dense row-major matrix of doubles. All numerical state in the library is
// built out of this and std::vector<double>.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major, values.size() == rows * cols

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), values(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }

  bool empty() const { return rows == 0 || cols == 0; }
  bool all_finite() const;

  static Matrix from_rows(const std::vector<std::vector<double>>& rows_in);
};

// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
// C = A * B^T  (the common shape in layer forward passes)
Matrix matmul_bt(const Matrix& a, const Matrix& b);
// C = A^T * B  (parameter-gradient shape)
Matrix matmul_at(const Matrix& a, const Matrix& b);

void check_same_shape(const Matrix& a, const Matrix& b, const char* where);

}  // namespace tdde
