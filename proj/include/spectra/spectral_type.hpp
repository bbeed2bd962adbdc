#pragma once

#include <string>
#include <vector>

namespace spectra {

// One node of a point's nested-parenthesis tree. Leaves are blocks and carry
// the eigenvalue-chain multiplicities (m_{[i,j,1]}, ..., m_{[i,j,e]}); an
// internal node groups blocks whose polynomial parts agree one level deeper.
struct PtNode {
  std::vector<PtNode> children;       // empty iff leaf
  std::vector<long long> chain;       // leaf payload; multiplicities >= 1

  bool is_leaf() const { return children.empty(); }
  long long total() const;
  friend bool operator==(const PtNode&, const PtNode&) = default;
};

// A singular point: tree of uniform leaf depth D = k-1 (k = pole order).
// A regular point is a bare leaf (depth 0, one block).
struct PointType {
  PtNode root;

  int depth() const;                  // uniform leaf depth
  int pole_order() const { return depth() + 1; }
  long long rank() const { return root.total(); }
  int num_blocks() const;
  // Blocks in DFS (written) order.
  std::vector<const PtNode*> blocks() const;
  std::vector<long long> block_sizes() const;
  int max_chain_len() const;
  // d_i(j,j') = (k-2) - depth(LCA of blocks j,j'), 0-based block indices.
  int d(int j, int j2) const;
  friend bool operator==(const PointType&, const PointType&) = default;
};

// Spectral type: points[0] is the point at infinity.
struct SpectralType {
  std::vector<PointType> points;

  long long rank() const { return points.empty() ? 0 : points[0].rank(); }
  friend bool operator==(const SpectralType&, const SpectralType&) = default;
};

// Throws std::invalid_argument naming the violated rule on bad input.
SpectralType parse_spectral_type(const std::string& text);

// Canonical printing: points ordered by (descending pole order, descending
// block-size multiset, structure); sibling subtrees likewise; eigenvalue
// chains kept in given order.
std::string print_spectral_type(const SpectralType& st);

SpectralType canonicalize(const SpectralType& st);

// Prints one point exactly as stored (no canonical re-ordering).
std::string print_point_raw(const PointType& p);

// Keys realizing the canonical descending order (larger key first).
std::vector<long long> node_sort_key(const PtNode& n);
std::vector<long long> point_sort_key(const PointType& p);

// Validates invariants (rank consistency, multiplicities >= 1, uniform leaf
// depth); throws on violation. parse_spectral_type calls this.
void validate(const SpectralType& st);

}  // namespace spectra
