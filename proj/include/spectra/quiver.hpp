#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "spectra/rational.hpp"

namespace spectra {

// Vertex tags follow the [i,j] / [i,j,k] naming of the quiver attached to a
// tuple of HTL normal forms: i = singular-point index (0 = infinity),
// j = block index within the point, k = leg depth.
struct VertexTag {
  enum Kind : std::uint8_t { Irr, Leg } kind = Irr;
  int i = 0;  // point index, 0-based
  int j = 1;  // block index, 1-based
  int k = 0;  // leg depth, 1-based; 0 for Irr tags

  static VertexTag irr(int i, int j) { return {Irr, i, j, 0}; }
  static VertexTag leg(int i, int j, int k) { return {Leg, i, j, k}; }

  friend bool operator==(const VertexTag&, const VertexTag&) = default;
  friend auto operator<=>(const VertexTag&, const VertexTag&) = default;
  std::string str() const;
};

using DimVector = std::vector<long long>;
using ParamVector = std::vector<Rat>;

// Finite quiver with tagged vertices and an arrow multiplicity table.
// Multiplicities live in a dense matrix: arrows_[s][t] = #arrows s -> t.
class Quiver {
 public:
  Quiver() = default;
  explicit Quiver(std::vector<VertexTag> vertices);

  int size() const { return static_cast<int>(vertices_.size()); }
  const std::vector<VertexTag>& vertices() const { return vertices_; }
  const VertexTag& tag(int v) const { return vertices_[v]; }
  std::optional<int> index_of(const VertexTag& t) const;

  void add_arrows(int src, int dst, long long mult);
  long long arrows(int src, int dst) const { return arrows_[src][dst]; }
  // Undirected edge count between two vertices (loops not included).
  long long edges(int u, int v) const { return arrows_[u][v] + arrows_[v][u]; }
  bool has_loop(int v) const { return arrows_[v][v] != 0; }
  long long total_arrows() const;

  nlohmann::json to_json() const;
  static Quiver from_json(const nlohmann::json& j);

 private:
  std::vector<VertexTag> vertices_;
  std::vector<std::vector<long long>> arrows_;
};

// Euler form <a,b> = sum_v a_v b_v - sum_{arrows s->t} a_s b_t.
long long euler_form(const Quiver& q, const DimVector& a, const DimVector& b);
// Symmetrization (a,b) = <a,b> + <b,a>.
long long sym_form(const Quiver& q, const DimVector& a, const DimVector& b);
// Tits form q(a) = (a,a)/2 and p(a) = 1 - q(a).
long long tits_q(const Quiver& q, const DimVector& a);
long long p_val(const Quiver& q, const DimVector& a);

// (a, eps_v) where eps_v is the coordinate vector at vertex v.
long long pair_simple(const Quiver& q, const DimVector& a, int v);
Rat pair_simple(const Quiver& q, const ParamVector& l, int v);

// s_v(a) = a - (a, eps_v) eps_v. Throws if v carries an edge-loop.
DimVector simple_reflection(const Quiver& q, int v, const DimVector& a);
// r_v(l)_b = l_b - (eps_v, eps_b) l_v, the dual reflection on parameters.
ParamVector lambda_reflection(const Quiver& q, int v, const ParamVector& l);

Rat dot(const ParamVector& l, const DimVector& a);

// True iff the subquiver on the support of v (arrows undirected) is connected.
bool support_connected(const Quiver& q, const DimVector& v);

// Fundamental set F: v >= 0, v != 0, (v, eps_a) <= 0 at every loop-free
// vertex, support connected.
bool is_in_fundamental_set(const Quiver& q, const DimVector& v);

enum class RootKind { RealRoot, ImaginaryRoot, NotRoot };

// Height-descent classification: reflect a sign-coherent vector at vertices
// with positive pairing until it reaches +-eps_a (real), F u -F (imaginary),
// or goes sign-incoherent / support-disconnected (not a root).
RootKind classify_root(const Quiver& q, const DimVector& v);

std::string to_string(RootKind k);

}  // namespace spectra
