#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectra/spectral_calc.hpp"

namespace spectra {

// Block choice j_i for every point i = 0..p (1-based; regular points are 1).
struct JTuple {
  std::vector<int> j;
  friend bool operator==(const JTuple&, const JTuple&) = default;
  std::string str() const;
};

// All of J = prod_i J_i, in lexicographic order of the block choices.
std::vector<JTuple> all_tuples(const QuiverModel& m);

// Indicator of {[i, j_i] : i in I_irr}; a positive real root.
DimVector epsilon_of(const QuiverModel& m, const JTuple& t);

long long pair_tuple(const QuiverModel& m, const DimVector& a, const JTuple& t);
Rat lambda_tuple(const QuiverModel& m, const ParamVector& l, const JTuple& t);

// s_i(b) = b - (b, eps_i) eps_i on the balanced lattice.
DimVector mc_reflect_dim(const QuiverModel& m, const JTuple& t, const DimVector& a);

// Parameter counterpart of mc_i, derived from the residue-eigenvalue shifts
// of middle convolution: dual to mc_reflect_dim on L and an involution.
ParamVector mc_reflect_param(const QuiverModel& m, const JTuple& t, const ParamVector& l);

// Balanced nonnegative vectors pairing <= 0 with every generator of W^mc,
// connected support: the fundamental domain F~.
bool is_in_L_fundamental(const QuiverModel& m, const DimVector& a);

bool is_balanced(const QuiverModel& m, const DimVector& a);

enum class SigmaMode { Plain, Dif };

struct SigmaVerdict {
  bool member = false;
  // 0 = member, 1 = not a positive root (or not in L+), 2 = lambda.a != 0,
  // 3 = dominated by a decomposition (stored as witness).
  int failed_clause = 0;
  std::vector<DimVector> witness;
  nlohmann::json to_json() const;
};

// Crawley-Boevey membership test; decompositions enumerated exhaustively
// over {0 < beta <= a}. `parallel` switches the OpenMP search path; results
// are identical (witness = lexicographically least violating decomposition).
SigmaVerdict sigma_membership(const QuiverModel& m, const ParamVector& l, const DimVector& a,
                              SigmaMode mode, bool parallel = false);

struct ReductionStep {
  bool is_tuple = true;
  JTuple tuple;
  VertexTag leg;
  long long pairing = 0;
  DimVector alpha_after;
  ParamVector lambda_after;
};

struct ReductionTrace {
  enum class Terminal { Fundamental, RealRoot, Stuck };
  Terminal terminal = Terminal::Fundamental;
  std::string stuck_reason;
  DimVector alpha_in, alpha_out;
  ParamVector lambda_in, lambda_out;
  std::vector<ReductionStep> steps;
  nlohmann::json to_json() const;
};

// Greedy height descent to the L-fundamental set (or a real root eps_i):
// maximal pairing first, generator order breaking ties, skipping generators
// with lambda_g = 0. A stuck state is reported, not silently ignored.
ReductionTrace reduce_to_fundamental(const QuiverModel& m, const ParamVector& l,
                                     const DimVector& a);

// lambda is fractional if lambda'_i is never an integer over the whole
// leg-reflection orbit of lambda.
bool is_fractional(const QuiverModel& m, const ParamVector& l);

// Replays reduce_to_fundamental, requiring fractionality at every prefix.
bool has_fractional_reduction(const QuiverModel& m, const ParamVector& l, const DimVector& a);

// Spectral-data bookkeeping of middle convolution on an integrable
// deformation: (lambda, alpha) -> (r_i lambda, s_i alpha). Throws MathError
// when lambda_i = 0.
std::pair<ParamVector, DimVector> transform_spectral_data(const QuiverModel& m, const JTuple& t,
                                                          const ParamVector& l, const DimVector& a);

}  // namespace spectra
