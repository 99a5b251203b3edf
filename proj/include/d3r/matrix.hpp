#pragma once

#include <optional>
#include <vector>

#include "d3r/field.hpp"

namespace d3r {

using Vec = std::vector<Fe>;

class Matrix {
 public:
  Matrix() : F_(), rows_(0), cols_(0) {}
  Matrix(Field F, size_t rows, size_t cols) : F_(F), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static Matrix identity(Field F, size_t n);
  static Matrix from_rows(Field F, const std::vector<Vec>& rows, size_t cols);
  static Matrix from_columns(Field F, const std::vector<Vec>& columns, size_t rows);

  const Field& field() const { return F_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  Fe& at(size_t i, size_t j) { return a_[i * cols_ + j]; }
  Fe at(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  Vec row(size_t i) const;
  Vec column(size_t j) const;
  Matrix transpose() const;

  Matrix operator*(const Matrix& o) const;
  Vec apply(const Vec& x) const;
  bool operator==(const Matrix& o) const;

 private:
  Field F_;
  size_t rows_, cols_;
  std::vector<Fe> a_;
};

// Reduced row echelon form in place; returns the pivot column of each pivot row.
std::vector<size_t> row_reduce(Matrix& m);

size_t rank(const Matrix& m);
std::vector<Vec> kernel_basis(const Matrix& m);
Fe determinant(const Matrix& m);
std::optional<Matrix> inverse(const Matrix& m);
// Some solution of m·x = b, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Matrix& m, const Vec& b);

}  // namespace d3r
