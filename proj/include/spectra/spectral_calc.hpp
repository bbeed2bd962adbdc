#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectra/quiver.hpp"
#include "spectra/spectral_type.hpp"

namespace spectra {

// The quiver attached to a spectral type, with the vertex bookkeeping the
// rest of the library needs. Points with a single block must be regular
// (pole order 1); normalize() first otherwise.
struct QuiverModel {
  SpectralType st;                                    // canonical input copy
  Quiver q;
  DimVector alpha;
  std::vector<char> is_irr;                           // per point; point 0 always
  std::vector<std::vector<int>> irr_vertex;           // [i][j-1] -> vertex, i irr
  std::vector<std::vector<std::vector<int>>> leg_vertex;  // [i][j-1][k-1] -> vertex

  int num_points() const { return static_cast<int>(st.points.size()); }
  long long rank() const { return st.rank(); }
};

QuiverModel quiver_model(const SpectralType& st);

inline std::pair<Quiver, DimVector> quiver_of(const SpectralType& st) {
  auto m = quiver_model(st);
  return {std::move(m.q), std::move(m.alpha)};
}

// idx m = 2 q(alpha).
long long rigidity_index(const SpectralType& st);

// Reduced: no point i in {1..p} consists of a single block with a length-1
// eigenvalue chain. (Point 0 is exempt.)
bool is_reduced(const SpectralType& st);

// Strips the scalar polynomial part of every single-block point of pole
// order > 1, making it regular (k_i := 1). Chains are kept.
SpectralType normalize(const SpectralType& st);

// --- HTL symbol data -------------------------------------------------------

// Concrete per-point data over a spectral type: eigenvalue chains xi and the
// polynomial-part coefficients of each block. qcoef[i][j][v] is the
// coefficient of z^{-(v+2)} in q^{(i)}_j (length k_i - 1, highest power
// first is index k_i-3 ... we store index v so power = v+2).
struct HTLSymbolData {
  SpectralType st;
  std::vector<std::vector<std::vector<Rat>>> xi;
  std::vector<std::vector<std::vector<Rat>>> qcoef;

  int num_points() const { return static_cast<int>(st.points.size()); }
  long long rank() const { return st.rank(); }
};

// Synthesizes q-coefficients from the tree (distinct small integers among
// siblings) and eigenvalue chains from the given seed values; validates.
HTLSymbolData make_symbol_data(const SpectralType& st,
                               const std::vector<std::vector<std::vector<Rat>>>& xi);

// Deterministic default chains: xi distinct small rationals per block.
HTLSymbolData make_symbol_data(const SpectralType& st);

void validate_symbol_data(const HTLSymbolData& h);

// lambda_{[i,j]} = -xi^{[i,j]}_1 (i in I_irr \ {0}),
// lambda_{[0,j]} = -xi^{[0,j]}_1 - sum_{i in I_reg} xi^{[i,1]}_1,
// lambda_{[i,j,k]} = xi_k - xi_{k+1}; indexed by quiver_model(st) vertices.
ParamVector lambda_of(const HTLSymbolData& h);

// --- The lift lattice L^ and shapes ----------------------------------------

// Generator of L^_beta: either a J-tuple (block choice per point) or a leg.
struct LiftGen {
  bool is_tuple = true;
  std::vector<int> jchoice;  // 1-based block choice per point (tuples)
  VertexTag leg;             // legs
  std::string id() const;
};

struct LiftLattice {
  QuiverModel model;
  DimVector beta;
  std::vector<LiftGen> gens;
  std::vector<std::vector<long long>> gram;  // symmetric, diag 2, offdiag <= 0
  // xi[v][g] — the projection matrix: quiver vertex v row, generator g column.
  std::vector<std::vector<long long>> xi;
};

// Generators restricted to the support of beta (J_beta and legs in supp);
// beta must be balanced and supported on the model. For shapes pass alpha.
LiftLattice lift_lattice(const SpectralType& st, const DimVector& beta);

DimVector xi_project(const LiftLattice& ll, const DimVector& gamma);

struct XiFiber {
  DimVector base;                      // one integer solution, over generators
  std::vector<DimVector> kernel;       // integer basis of ker Xi_beta
};

// Throws if beta has no integer preimage.
XiFiber xi_fiber(const LiftLattice& ll, const DimVector& beta);

// Diagram with affine-linear vertex coefficients: node u carries
// coeff_base[u] + sum_t coeff_params[u][t] * a_t, a_t in Z.
struct Shape {
  std::vector<std::string> ids;
  std::vector<std::vector<long long>> gram;
  std::vector<long long> coeff_base;
  std::vector<std::vector<long long>> coeff_params;  // [node][param]
  int n_params = 0;

  int size() const { return static_cast<int>(ids.size()); }
  long long edge_mult(int u, int v) const { return u == v ? 0 : -gram[u][v]; }
  nlohmann::json to_json() const;
  static Shape from_json(const nlohmann::json& j);
};

Shape shape_of(const SpectralType& st);

}  // namespace spectra
