#include "tdde/matrix.hpp"

#include <cmath>
#include <string>

namespace tdde {

bool Matrix::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows_in) {
  if (rows_in.empty()) return {};
  Matrix m(rows_in.size(), rows_in[0].size());
  for (std::size_t i = 0; i < rows_in.size(); ++i) {
    if (rows_in[i].size() != m.cols)
      throw ShapeError("from_rows: ragged input at row " + std::to_string(i));
    for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows_in[i][j];
  }
  return m;
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw ShapeError(std::string(where) + ": shape mismatch (" +
                     std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                     std::to_string(b.rows) + "x" + std::to_string(b.cols) + ")");
}

// i-k-j loop order keeps the inner loop contiguous in both b and c.
Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i) {
    double* ci = c.values.data() + i * c.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a.values[i * a.cols + k];
      const double* bk = b.values.data() + k * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

// Materializes b^T so the hot loop runs in the cache-friendly i-k-j order;
// the transposed operand is small (layer weights).
Matrix matmul_bt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw ShapeError("matmul_bt: inner dimensions differ");
  Matrix bt(b.cols, b.rows);
  for (std::size_t i = 0; i < b.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) bt.values[j * b.rows + i] = b.values[i * b.cols + j];
  Matrix c(a.rows, b.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.rows); ++i) {
    double* ci = c.values.data() + i * c.cols;
    const double* ai = a.values.data() + i * a.cols;
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = ai[k];
      const double* btk = bt.values.data() + k * bt.cols;
      for (std::size_t j = 0; j < bt.cols; ++j) ci[j] += aik * btk[j];
    }
  }
  return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw ShapeError("matmul_at: inner dimensions differ");
  Matrix c(a.cols, b.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.cols); ++i) {
    double* ci = c.values.data() + i * c.cols;
    for (std::size_t k = 0; k < a.rows; ++k) {
      const double aki = a.values[k * a.cols + i];
      const double* bk = b.values.data() + k * b.cols;
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

}  // namespace tdde
