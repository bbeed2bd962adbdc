#pragma once

#include <optional>
#include <vector>

#include "spectra/rational.hpp"

namespace spectra {

// Dense exact-rational matrix. Everything is plain Gaussian elimination over
// mpq; no floating point, no modular shortcuts.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Rat(0)) {}

  static RatMatrix identity(int n);
  static RatMatrix zero(int rows, int cols) { return RatMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& operator()(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Rat& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  bool is_zero() const;
  bool is_square() const { return rows_ == cols_; }

  RatMatrix transpose() const;
  RatMatrix block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const RatMatrix& b);

  friend RatMatrix operator+(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator-(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator*(const RatMatrix& x, const RatMatrix& y);
  friend RatMatrix operator*(const Rat& s, const RatMatrix& x);
  RatMatrix operator-() const { return Rat(-1) * *this; }
  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

  Rat trace() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

int rank(const RatMatrix& m);
// Basis of the right kernel {v : m v = 0}, as columns of the result.
RatMatrix kernel_basis(const RatMatrix& m);
// Solves m x = b (b may have several columns); empty optional if unsolvable.
std::optional<RatMatrix> solve(const RatMatrix& m, const RatMatrix& b);
std::optional<RatMatrix> inverse(const RatMatrix& m);
Rat determinant(const RatMatrix& m);

// Row indices of pivot positions after column-space reduction of m; the
// complement indexes a coordinate complement of the column span.
std::vector<int> pivot_rows(const RatMatrix& m);

}  // namespace spectra
