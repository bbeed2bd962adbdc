#pragma once

#include <optional>
#include <vector>

namespace spectra {

using IntMat = std::vector<std::vector<long long>>;
using IntVec = std::vector<long long>;

struct IntegerSolution {
  IntVec particular;
  std::vector<IntVec> kernel;
};

// Solves M x = b over the integers via Smith normal form. Returns the empty
// optional when no integer solution exists.
std::optional<IntegerSolution> solve_integer(const IntMat& M, const IntVec& b);

// Column-style Hermite normal form of M (operations on columns only):
// returns H with the same column span over Z, columns in echelon form with
// positive pivots and entries above each pivot reduced to [0, pivot).
// Zero columns are dropped.
IntMat hermite_normal_form(const IntMat& M);

// Reduces v modulo the lattice spanned by the columns of an HNF basis H.
IntVec reduce_mod_lattice(IntVec v, const IntMat& H);

}  // namespace spectra
