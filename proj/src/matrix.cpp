#include "d3r/matrix.hpp"

#include <utility>

namespace d3r {

Matrix Matrix::identity(Field F, size_t n) {
  Matrix m(F, n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field F, const std::vector<Vec>& rows, size_t cols) {
  Matrix m(F, rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw InvalidArgument("ragged matrix rows");
    for (size_t j = 0; j < cols; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_columns(Field F, const std::vector<Vec>& columns, size_t rows) {
  Matrix m(F, rows, columns.size());
  for (size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw InvalidArgument("ragged matrix columns");
    for (size_t i = 0; i < rows; ++i) m.at(i, j) = columns[j][i];
  }
  return m;
}

Vec Matrix::row(size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }

Vec Matrix::column(size_t j) const {
  Vec c(rows_);
  for (size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

Matrix Matrix::transpose() const {
  Matrix t(F_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw InvalidArgument("matrix dimension mismatch in product");
  Matrix r(F_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t k = 0; k < cols_; ++k) {
      Fe v = at(i, k);
      if (v == 0) continue;
      for (size_t j = 0; j < o.cols_; ++j) r.at(i, j) = F_.add(r.at(i, j), F_.mul(v, o.at(k, j)));
    }
  return r;
}

Vec Matrix::apply(const Vec& x) const {
  if (x.size() != cols_) throw InvalidArgument("matrix-vector dimension mismatch");
  Vec y(rows_, 0);
  for (size_t i = 0; i < rows_; ++i) {
    Fe s = 0;
    for (size_t j = 0; j < cols_; ++j)
      if (x[j]) s = F_.add(s, F_.mul(at(i, j), x[j]));
    y[i] = s;
  }
  return y;
}

bool Matrix::operator==(const Matrix& o) const {
  return F_ == o.F_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::vector<size_t> row_reduce(Matrix& m) {
  const Field& F = m.field();
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t piv = r;
    while (piv < m.rows() && m.at(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(r, j));
    Fe iv = F.inv(m.at(r, c));
    for (size_t j = c; j < m.cols(); ++j) m.at(r, j) = F.mul(m.at(r, j), iv);
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      Fe f = m.at(i, c);
      for (size_t j = c; j < m.cols(); ++j) m.at(i, j) = F.sub(m.at(i, j), F.mul(f, m.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

size_t rank(const Matrix& m) {
  Matrix t = m;
  return row_reduce(t).size();
}

std::vector<Vec> kernel_basis(const Matrix& m) {
  Matrix t = m;
  auto pivots = row_reduce(t);
  const Field& F = m.field();
  std::vector<bool> is_pivot(m.cols(), false);
  for (size_t c : pivots) is_pivot[c] = true;
  std::vector<Vec> basis;
  for (size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols(), 0);
    v[free] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = F.neg(t.at(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

Fe determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("determinant of a non-square matrix");
  const Field& F = m.field();
  Matrix t = m;
  Fe det = 1;
  size_t n = m.rows();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && t.at(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; ++j) std::swap(t.at(piv, j), t.at(c, j));
      det = F.neg(det);
    }
    det = F.mul(det, t.at(c, c));
    Fe iv = F.inv(t.at(c, c));
    for (size_t i = c + 1; i < n; ++i) {
      if (t.at(i, c) == 0) continue;
      Fe f = F.mul(t.at(i, c), iv);
      for (size_t j = c; j < n; ++j) t.at(i, j) = F.sub(t.at(i, j), F.mul(f, t.at(c, j)));
    }
  }
  return det;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("inverse of a non-square matrix");
  size_t n = m.rows();
  Matrix aug(m.field(), n, 2 * n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(m.field(), n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
  return inv;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw InvalidArgument("right-hand side length mismatch");
  Matrix aug(m.field(), m.rows(), m.cols() + 1);
  for (size_t i = 0; i < m.rows(); ++i) {
    for (size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = b[i];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols(), 0);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, m.cols());
  return x;
}

}  // namespace d3r
