#include "spectra/ratmat.hpp"

#include <optional>
#include <stdexcept>

namespace spectra {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::block(int r0, int c0, int nr, int nc) const {
  if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("block");
  RatMatrix b(nr, nc);
  for (int r = 0; r < nr; ++r)
    for (int c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void RatMatrix::set_block(int r0, int c0, const RatMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw std::out_of_range("set_block");
  for (int r = 0; r < b.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

RatMatrix operator+(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix shape mismatch");
  RatMatrix r = x;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
  return r;
}

RatMatrix operator-(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows_ != y.rows_ || x.cols_ != y.cols_) throw std::invalid_argument("matrix shape mismatch");
  RatMatrix r = x;
  for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
  return r;
}

RatMatrix operator*(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols_ != y.rows_) throw std::invalid_argument("matrix shape mismatch in product");
  RatMatrix r(x.rows_, y.cols_);
  for (int i = 0; i < x.rows_; ++i)
    for (int k = 0; k < x.cols_; ++k) {
      const Rat& v = x(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

RatMatrix operator*(const Rat& s, const RatMatrix& x) {
  RatMatrix r = x;
  for (auto& v : r.a_) v *= s;
  return r;
}

Rat RatMatrix::trace() const {
  if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
  Rat t = 0;
  for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

namespace {

// Row echelon reduction in place; returns pivot columns.
std::vector<int> echelon(RatMatrix& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int pr = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    if (pr != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(pr, j), m(r, j));
    Rat inv = Rat(1) / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rat f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

int rank(const RatMatrix& m) {
  RatMatrix w = m;
  return static_cast<int>(echelon(w).size());
}

RatMatrix kernel_basis(const RatMatrix& m) {
  RatMatrix w = m;
  auto pivots = echelon(w);
  std::vector<char> is_pivot(m.cols(), 0);
  for (int c : pivots) is_pivot[c] = 1;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  RatMatrix k(m.cols(), static_cast<int>(free_cols.size()));
  for (size_t f = 0; f < free_cols.size(); ++f) {
    k(free_cols[f], static_cast<int>(f)) = 1;
    for (size_t p = 0; p < pivots.size(); ++p) k(pivots[p], static_cast<int>(f)) = -w(static_cast<int>(p), free_cols[f]);
  }
  return k;
}

std::optional<RatMatrix> solve(const RatMatrix& m, const RatMatrix& b) {
  if (m.rows() != b.rows()) throw std::invalid_argument("solve: shape mismatch");
  RatMatrix aug(m.rows(), m.cols() + b.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, m.cols(), b);
  auto pivots = echelon(aug);
  // Any pivot in the b-part means inconsistency.
  for (int c : pivots)
    if (c >= m.cols()) return std::nullopt;
  RatMatrix x(m.cols(), b.cols());
  for (size_t p = 0; p < pivots.size(); ++p)
    for (int j = 0; j < b.cols(); ++j) x(pivots[p], j) = aug(static_cast<int>(p), m.cols() + j);
  return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse of non-square matrix");
  RatMatrix aug(m.rows(), 2 * m.cols());
  aug.set_block(0, 0, m);
  aug.set_block(0, m.cols(), RatMatrix::identity(m.rows()));
  auto pivots = echelon(aug);
  if (static_cast<int>(pivots.size()) < m.rows() || pivots.back() >= m.cols()) return std::nullopt;
  for (int i = 0; i < m.rows(); ++i)
    if (pivots[i] != i) return std::nullopt;
  return aug.block(0, m.cols(), m.rows(), m.cols());
}

Rat determinant(const RatMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of non-square matrix");
  RatMatrix w = m;
  Rat det = 1;
  for (int c = 0; c < w.cols(); ++c) {
    int pr = -1;
    for (int i = c; i < w.rows(); ++i)
      if (w(i, c) != 0) {
        pr = i;
        break;
      }
    if (pr < 0) return Rat(0);
    if (pr != c) {
      for (int j = 0; j < w.cols(); ++j) std::swap(w(pr, j), w(c, j));
      det = -det;
    }
    det *= w(c, c);
    Rat inv = Rat(1) / w(c, c);
    for (int i = c + 1; i < w.rows(); ++i) {
      if (w(i, c) == 0) continue;
      Rat f = w(i, c) * inv;
      for (int j = c; j < w.cols(); ++j) w(i, j) -= f * w(c, j);
    }
  }
  return det;
}

std::vector<int> pivot_rows(const RatMatrix& m) {
  // Pivot rows of the column space = pivot columns of the transpose.
  RatMatrix t = m.transpose();
  return echelon(t);
}

}  // namespace spectra
