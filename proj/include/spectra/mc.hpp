#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectra/ratmat.hpp"
#include "spectra/spectral_calc.hpp"
#include "spectra/weyl.hpp"

namespace spectra {

// Tuple of polar parts: pts[i][v] = A^{(i)}_{v+1}, the coefficient of
// z^{-(v+1)} at point i; pts[i].size() = k_i. The moduli-space constraint
// sum_i A^{(i)}_1 = 0 is validated where an operation needs it, not on
// construction (additions move through states that break it).
struct HTLTuple {
  std::vector<std::vector<RatMatrix>> pts;

  int num_points() const { return static_cast<int>(pts.size()); }
  int pole_order(int i) const { return static_cast<int>(pts[i].size()); }
  int rank() const { return pts.empty() ? 0 : pts[0][0].rows(); }
  RatMatrix residue_sum() const;
  bool residue_sum_zero() const { return residue_sum().is_zero(); }

  nlohmann::json to_json() const;
  static HTLTuple from_json(const nlohmann::json& j);
  friend bool operator==(const HTLTuple&, const HTLTuple&) = default;
};

nlohmann::json symbol_data_to_json(const HTLSymbolData& h);
HTLSymbolData symbol_data_from_json(const nlohmann::json& j);

// Block-diagonal normal form matrices of point i (exact HTL normal form).
std::vector<RatMatrix> normal_form_matrices(const HTLSymbolData& h, int i);

// Builds a tuple realizing h: points 1..p are conjugated normal forms, the
// point-0 residue is forced by the residue-sum constraint and then checked
// against h's point-0 chains (error when the data does not permit it).
HTLTuple build_htl_tuple(const HTLSymbolData& h,
                         const std::vector<RatMatrix>& conjugators = {});

// Add^{(t)}_poly: subtracts the scalar polynomial sum_v poly[v] z^{-(v+1)}
// at point t; deg(poly) <= k_t.
HTLTuple addition(int t, const std::vector<Rat>& poly, const HTLTuple& A);

// The 5-tuple (V, W, T, Q, P); W_i = V^{k_i} / Ker A^_i held in explicit
// quotient coordinates.
struct CanonicalDatum {
  int n = 0;
  std::vector<int> wdim;
  std::vector<RatMatrix> proj;  // pi_i : k_i n -> w_i
  std::vector<RatMatrix> lift;  // complement embedding w_i -> k_i n
  std::vector<RatMatrix> T, Q, P;  // induced per-point maps

  int dim_w() const;
  RatMatrix q_total() const;  // n x dimW
  RatMatrix p_total() const;  // dimW x n
  RatMatrix qp() const { return q_total() * p_total(); }
};

CanonicalDatum canonical_datum(const HTLTuple& A);

struct McOptions {
  // Selects the splitting P' (coordinate section on non-pivot rows); any
  // variant yields an equivalent output.
  int section_variant = 0;
};

struct McResult {
  HTLTuple out;
  long long dim_w = 0;
  long long out_rank = 0;
  Rat xi_i;
  std::optional<HTLSymbolData> out_data;  // predicted HTL data of `out`
  std::string data_note;                  // reason when out_data is absent
};

// Middle convolution mc_i: Add_i, canonical datum, V' = Coker P with section
// P' (Q' xi^{-1} P' = Id), coefficients Q'_i N_i^{j-1} P'_i, then
// Add_i^{-1} o Add^{(0)}_{2 xi_i z^{-1}}. Throws MathError when xi_i = 0 or
// the output rank would be 0.
McResult middle_convolution(const HTLTuple& A, const JTuple& t, const HTLSymbolData& h,
                            const McOptions& opt = {});

// Prop. middleconv(3) bookkeeping: new block sizes and shifted chains.
std::optional<HTLSymbolData> predict_mc_data(const HTLSymbolData& h, const JTuple& t,
                                             long long dim_w, std::string* why = nullptr);

// Burnside test: the span of words in all coefficients reaches n^2 iff no
// proper invariant subspace exists.
bool is_irreducible(const HTLTuple& A);

// Solves {g : g A = B g}; for irreducible tuples the space is <= 1
// dimensional and any nonzero solution is invertible.
std::optional<RatMatrix> equivalent(const HTLTuple& A, const HTLTuple& B);

// Per-point, per-block residue eigen data: (value, multiplicity) chains.
using ResidueChains = std::vector<std::vector<std::vector<std::pair<Rat, long long>>>>;

// Extracts eigenvalue multiplicities and rank chains of the residues per
// block via simultaneous eigenspace separation of the leading coefficients;
// throws when the separation fails (non-semisimple leading data).
ResidueChains residue_spectral_data(const HTLTuple& A, const HTLSymbolData& h);

// Exact truncated-orbit membership: solves for a truncated gauge X(z) with
// X[N_h] = A; complete for any pole order (used to verify mc outputs).
bool verify_htl_membership(const HTLTuple& A, const HTLSymbolData& h, unsigned seed = 12345);

// Representation of the doubled quiver: one forward and one reverse matrix
// per arrow (multiplicities expanded).
struct QuiverRep {
  struct ArrowRep {
    int src = 0, dst = 0;
    RatMatrix x;      // dim_dst x dim_src
    RatMatrix xstar;  // dim_src x dim_dst
  };
  DimVector dims;
  std::vector<ArrowRep> arrows;
};

// mu(x)_a = sum_{t(rho)=a} x_rho x_rho* - sum_{s(rho)=a} x_rho* x_rho.
std::vector<RatMatrix> moment_map(const Quiver& q, const QuiverRep& rep);

}  // namespace spectra
