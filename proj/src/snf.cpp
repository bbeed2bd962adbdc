#include "spectra/snf.hpp"

#include <algorithm>
#include <cstdlib>

namespace spectra {

namespace {

void swap_rows(IntMat& m, int a, int b) { std::swap(m[a], m[b]); }
void swap_cols(IntMat& m, int a, int b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}
// row[a] += f * row[b]
void add_row(IntMat& m, int a, int b, long long f) {
  for (size_t j = 0; j < m[a].size(); ++j) m[a][j] += f * m[b][j];
}
void add_col(IntMat& m, int a, int b, long long f) {
  for (auto& row : m) row[a] += f * row[b];
}
void negate_row(IntMat& m, int a) {
  for (auto& x : m[a]) x = -x;
}
void negate_col(IntMat& m, int a) {
  for (auto& row : m) row[a] = -row[a];
}

IntMat identity(int n) {
  IntMat id(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

}  // namespace

std::optional<IntegerSolution> solve_integer(const IntMat& M, const IntVec& b) {
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  IntMat S = M, U = identity(rows), V = identity(cols);

  int t = 0;
  while (t < rows && t < cols) {
    // Find a pivot of minimal absolute value in the remaining block.
    int pr = -1, pc = -1;
    long long best = 0;
    for (int r = t; r < rows; ++r)
      for (int c = t; c < cols; ++c)
        if (S[r][c] != 0 && (pr < 0 || std::llabs(S[r][c]) < best)) {
          pr = r;
          pc = c;
          best = std::llabs(S[r][c]);
        }
    if (pr < 0) break;
    swap_rows(S, t, pr);
    swap_rows(U, t, pr);
    swap_cols(S, t, pc);
    swap_cols(V, t, pc);
    bool clean = true;
    for (int r = t + 1; r < rows; ++r)
      if (S[r][t] % S[t][t] != 0 || S[r][t] != 0) {
        long long f = -(S[r][t] / S[t][t]);
        add_row(S, r, t, f);
        add_row(U, r, t, f);
        if (S[r][t] != 0) clean = false;
      }
    for (int c = t + 1; c < cols; ++c)
      if (S[t][c] != 0) {
        long long f = -(S[t][c] / S[t][t]);
        add_col(S, c, t, f);
        add_col(V, c, t, f);
        if (S[t][c] != 0) clean = false;
      }
    if (!clean) continue;  // remainders left; repeat with a smaller pivot
    if (S[t][t] < 0) {
      negate_row(S, t);
      negate_row(U, t);
    }
    ++t;
  }
  const int rank = t;

  // S y = U b
  IntVec ub(rows, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < rows; ++c) ub[r] += U[r][c] * b[c];
  IntVec y(cols, 0);
  for (int r = 0; r < rank; ++r) {
    if (ub[r] % S[r][r] != 0) return std::nullopt;
    y[r] = ub[r] / S[r][r];
  }
  for (int r = rank; r < rows; ++r)
    if (ub[r] != 0) return std::nullopt;

  IntegerSolution sol;
  sol.particular.assign(cols, 0);
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) sol.particular[i] += V[i][j] * y[j];
  for (int j = rank; j < cols; ++j) {
    IntVec k(cols, 0);
    for (int i = 0; i < cols; ++i) k[i] = V[i][j];
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

IntMat hermite_normal_form(const IntMat& M) {
  const int rows = static_cast<int>(M.size());
  const int cols = rows ? static_cast<int>(M[0].size()) : 0;
  IntMat H = M;
  int pc = 0;
  for (int r = 0; r < rows && pc < cols; ++r) {
    // Euclid across columns pc..end on row r.
    for (;;) {
      int nz = -1;
      long long best = 0;
      for (int c = pc; c < cols; ++c)
        if (H[r][c] != 0 && (nz < 0 || std::llabs(H[r][c]) < best)) {
          nz = c;
          best = std::llabs(H[r][c]);
        }
      if (nz < 0) break;
      swap_cols(H, pc, nz);
      bool done = true;
      for (int c = pc + 1; c < cols; ++c)
        if (H[r][c] != 0) {
          add_col(H, c, pc, -(H[r][c] / H[r][pc]));
          if (H[r][c] != 0) done = false;
        }
      if (done) break;
    }
    if (H[r][pc] == 0) continue;
    if (H[r][pc] < 0) negate_col(H, pc);
    for (int c = 0; c < pc; ++c) {
      long long f = H[r][c] / H[r][pc];
      if (H[r][c] % H[r][pc] < 0) f -= 1;  // floor division -> entries in [0, pivot)
      if (f != 0) add_col(H, c, pc, -f);
    }
    ++pc;
  }
  // Drop zero columns.
  IntMat out;
  for (int c = 0; c < pc; ++c) {
    IntVec col(rows);
    for (int r = 0; r < rows; ++r) col[r] = H[r][c];
    out.push_back(std::move(col));
  }
  // Return as rows x kept-cols matrix.
  IntMat res(rows, IntVec(out.size(), 0));
  for (size_t c = 0; c < out.size(); ++c)
    for (int r = 0; r < rows; ++r) res[r][c] = out[c][r];
  return res;
}

IntVec reduce_mod_lattice(IntVec v, const IntMat& H) {
  const int rows = static_cast<int>(H.size());
  const int cols = rows ? static_cast<int>(H[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols; ++c) {
    while (r < rows && H[r][c] == 0) ++r;
    if (r >= rows) break;
    long long piv = H[r][c];
    long long f = v[r] / piv;
    if (v[r] % piv < 0) f -= 1;
    if (f != 0)
      for (int i = 0; i < rows; ++i) v[i] -= f * H[i][c];
    ++r;
  }
  return v;
}

}  // namespace spectra
