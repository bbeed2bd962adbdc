#include "spectra/enumerate.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spectra/errors.hpp"
#include "spectra/snf.hpp"
#include "spectra/weyl.hpp"

namespace spectra {

nlohmann::json SearchBounds::to_json() const {
  return nlohmann::json{{"max_points", max_points},
                        {"max_pole", max_pole},
                        {"max_rank", max_rank},
                        {"max_blocks", max_blocks},
                        {"max_chain", max_chain}};
}

SearchBounds SearchBounds::from_json(const nlohmann::json& j) {
  SearchBounds b;
  if (j.contains("max_points")) b.max_points = j.at("max_points");
  if (j.contains("max_pole")) b.max_pole = j.at("max_pole");
  if (j.contains("max_rank")) b.max_rank = j.at("max_rank");
  if (j.contains("max_blocks")) b.max_blocks = j.at("max_blocks");
  if (j.contains("max_chain")) b.max_chain = j.at("max_chain");
  return b;
}

// --- point-type generation ---------------------------------------------------

namespace {

// Non-increasing chains summing to `size`, at most max_parts entries.
void gen_chains(long long size, long long max_first, int max_parts, std::vector<long long>& cur,
                std::vector<std::vector<long long>>& out) {
  if (size == 0) {
    if (!cur.empty()) out.push_back(cur);
    return;
  }
  if (max_parts == 0) return;
  for (long long first = std::min<long long>(size, max_first); first >= 1; --first) {
    cur.push_back(first);
    gen_chains(size - first, first, max_parts - 1, cur, out);
    cur.pop_back();
  }
}

struct SubTree {
  PtNode node;
  std::vector<long long> key;
  int leaves = 0;
  long long size = 0;
  // Exact d-weight of the subtree in any uniform-depth placement:
  // ceff = sum_j n_j^2 + chainW_j - sum_{j<j'} ((e-1) - lca) n_j n_j'.
  long long ceff = 0;
};

long long chain_weight(const std::vector<long long>& chain, long long alpha0) {
  long long acc = alpha0, w = 0;
  for (size_t k = 0; k + 1 < chain.size(); ++k) {
    long long nxt = acc - chain[k];
    w += nxt * nxt - acc * nxt;
    acc = nxt;
  }
  return w;
}

struct TreeGen {
  int max_chain;
  long long max_rank;
  long long tmin;  // least per-point weight that can still combine (idx/2)
  // memo[(depth, size, max_leaves)] -> subtrees sorted descending by key
  std::map<std::tuple<int, long long, int>, std::vector<SubTree>> memo;

  // A subtree of size s inside a point of rank <= max_rank can be
  // complemented by at most (max_rank - s)^2 of weight.
  long long threshold(long long size) const {
    long long slack = max_rank - size;
    return tmin - slack * slack;
  }

  const std::vector<SubTree>& subtrees(int depth, long long size, int max_leaves) {
    auto key = std::make_tuple(depth, size, max_leaves);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<SubTree> out;
    if (depth == 0) {
      std::vector<std::vector<long long>> chains;
      std::vector<long long> cur;
      if (max_leaves >= 1) gen_chains(size, size, max_chain, cur, chains);
      for (auto& c : chains) {
        SubTree t;
        t.node.chain = std::move(c);
        t.key = node_sort_key(t.node);
        t.leaves = 1;
        t.size = size;
        t.ceff = size * size + chain_weight(t.node.chain, size);
        if (t.ceff < threshold(size)) continue;
        out.push_back(std::move(t));
      }
    } else {
      std::vector<const SubTree*> cur;
      gen_children(depth - 1, size, size, max_leaves, 1, cur, out, nullptr, 0, 0, 0);
    }
    std::sort(out.begin(), out.end(),
              [](const SubTree& a, const SubTree& b) { return a.key > b.key; });
    return memo.emplace(key, std::move(out)).first->second;
  }

  // Appends internal nodes of total size `full` with >= min_children
  // children (a non-empty multiset of depth-d subtrees in non-increasing key
  // order). Prunes by the optimistic completion bound: the open remainder R
  // contributes at most R^2, and cross-products pay depth * (...).
  void gen_children(int child_depth, long long full, long long size, int max_leaves,
                    int min_children, std::vector<const SubTree*>& cur, std::vector<SubTree>& out,
                    const std::vector<long long>* prev_key, long long acc_ceff, long long acc_sum,
                    long long acc_cross) {
    const long long pen = child_depth;  // parent depth - 1
    if (size == 0) {
      if (static_cast<int>(cur.size()) < min_children) return;
      long long ceff = acc_ceff - pen * acc_cross;
      if (ceff < threshold(full)) return;
      SubTree t;
      for (const auto* c : cur) {
        t.node.children.push_back(c->node);
        t.leaves += c->leaves;
      }
      t.key = node_sort_key(t.node);
      t.size = full;
      t.ceff = ceff;
      out.push_back(std::move(t));
      return;
    }
    if (max_leaves <= 0) return;
    for (long long sz = size; sz >= 1; --sz) {
      const long long rem = size - sz;
      for (const auto& sub : subtrees(child_depth, sz, max_leaves)) {
        if (prev_key && sub.key > *prev_key) continue;  // keep non-increasing order
        if (sub.leaves > max_leaves) continue;
        long long cross = acc_cross + acc_sum * sz;
        long long optimistic =
            acc_ceff + sub.ceff + rem * rem - pen * (cross + (acc_sum + sz) * rem);
        if (optimistic < threshold(full)) continue;
        cur.push_back(&sub);
        gen_children(child_depth, full, rem, max_leaves - sub.leaves, min_children, cur, out,
                     &sub.key, acc_ceff + sub.ceff, acc_sum + sz, cross);
        cur.pop_back();
      }
    }
  }
};

struct PtEntry {
  PointType pt;
  long long C_irr = 0;   // weight when the point sits in an I_irr slot
  long long C_reg = 0;   // weight when regular at i >= 1 (pole-1 types only)
  long long H = 0;       // max_j h(j) for the F~ tuple bound
  long long S = 0;       // alpha_{[i,1,1]} for regular types
  bool regular = false;
  bool reg_usable = false;  // e >= 2: allowed at positions i >= 1
  std::vector<long long> key;
};

void collect_leaf_paths(const PtNode& n, std::vector<int>& cur,
                        std::vector<std::vector<int>>& out) {
  if (n.is_leaf()) {
    out.push_back(cur);
    return;
  }
  for (size_t c = 0; c < n.children.size(); ++c) {
    cur.push_back(static_cast<int>(c));
    collect_leaf_paths(n.children[c], cur, out);
    cur.pop_back();
  }
}

PtEntry summarize(const PointType& pt, long long n) {
  PtEntry e;
  e.pt = pt;
  e.key = point_sort_key(pt);
  auto blocks = pt.blocks();
  const int m = static_cast<int>(blocks.size());
  e.regular = pt.depth() == 0;
  if (e.regular) {
    const auto& chain = blocks[0]->chain;
    e.reg_usable = chain.size() >= 2;
    e.C_reg = chain_weight(chain, n);
    e.S = chain.size() >= 2 ? n - chain[0] : 0;
    e.C_irr = n * n + e.C_reg;  // role: point 0 regular (single [0,1] vertex)
    e.H = 2 * n - e.S;
    return e;
  }
  // Divergence depths from one pass over the leaf paths.
  std::vector<std::vector<int>> paths;
  std::vector<int> curp;
  collect_leaf_paths(pt.root, curp, paths);
  const int pole = pt.pole_order();
  std::vector<std::vector<long long>> d(m, std::vector<long long>(m, 0));
  for (int j = 0; j < m; ++j)
    for (int j2 = j + 1; j2 < m; ++j2) {
      size_t lca = 0;
      while (lca < paths[j].size() && lca < paths[j2].size() && paths[j][lca] == paths[j2][lca])
        ++lca;
      d[j][j2] = d[j2][j] = pole - 2 - static_cast<long long>(lca);
    }
  std::vector<long long> sz(m);
  for (int j = 0; j < m; ++j) sz[j] = blocks[j]->total();

  long long c = 0;
  for (int j = 0; j < m; ++j) c += sz[j] * sz[j] + chain_weight(blocks[j]->chain, sz[j]);
  for (int j = 0; j < m; ++j)
    for (int j2 = j + 1; j2 < m; ++j2) c -= d[j][j2] * sz[j] * sz[j2];
  e.C_irr = c;
  long long h = std::numeric_limits<long long>::min();
  for (int j = 0; j < m; ++j) {
    long long hj = 2 * sz[j];
    for (int j2 = 0; j2 < m; ++j2)
      if (j2 != j) hj -= d[j][j2] * sz[j2];
    if (blocks[j]->chain.size() >= 2) hj -= sz[j] - blocks[j]->chain[0];
    h = std::max(h, hj);
  }
  e.H = h;
  return e;
}

bool effective_filter(const Quiver& q, const DimVector& alpha) {
  long long g = 0;
  for (long long x : alpha) g = std::gcd(g, x);
  if (g <= 1) return true;
  long long p_full = p_val(q, alpha);
  for (long long r = 2; r <= g; ++r) {
    if (g % r != 0) continue;
    DimVector beta(alpha.size());
    for (size_t i = 0; i < alpha.size(); ++i) beta[i] = alpha[i] / r;
    if (!(p_full > r * p_val(q, beta))) return false;
  }
  return true;
}

struct Candidate {
  std::vector<PointType> points;  // canonical order, slot 0 first
};

// Verified fundamental type or nothing. Candidates arrive in canonical
// order with descending chains and the exact weight-sum and H filters
// applied, so reducedness and the F~ pairing conditions hold by
// construction; the remaining live checks are the rigidity index, support
// connectivity, and effectiveness. The full fundamental-set condition is
// re-asserted on every surviving type (cheap at that stage).
std::optional<EnumEntry> verify_candidate(const Candidate& cand, long long idx) {
  SpectralType st;
  st.points = cand.points;
  QuiverModel m;
  try {
    m = quiver_model(st);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (2 * tits_q(m.q, m.alpha) != idx) return std::nullopt;
  if (!support_connected(m.q, m.alpha)) return std::nullopt;
  if (!effective_filter(m.q, m.alpha)) return std::nullopt;
  if (!is_reduced(st) || !is_in_L_fundamental(m, m.alpha)) return std::nullopt;
  EnumEntry e;
  e.st = st;
  e.shape = shape_of(st);
  e.shape_key = canonical_shape(e.shape);
  e.winv = winv_of(st);
  return e;
}

}  // namespace

EnumerationResult enumerate_fundamental(long long idx, const SearchBounds& bounds, bool parallel) {
  if (idx % 2 != 0) throw std::invalid_argument("rigidity index must be even");
  if (idx > 0) throw std::invalid_argument("only idx <= 0 families are enumerated");
  EnumerationResult result;
  result.idx = idx;
  result.bounds = bounds;
  const long long t_half = idx / 2;

  std::vector<Candidate> candidates;

  for (long long n = 1; n <= bounds.max_rank; ++n) {
    TreeGen gen{bounds.max_chain, bounds.max_rank, t_half};
    // Irregular point types (>= 2 blocks, uniform depth 1..max_pole-1).
    std::vector<PtEntry> trees;
    for (int depth = 1; depth <= bounds.max_pole - 1; ++depth) {
      std::vector<SubTree> roots;
      std::vector<const SubTree*> cur;
      gen.gen_children(depth - 1, n, n, bounds.max_blocks, 2, cur, roots, nullptr, 0, 0, 0);
      for (auto& r : roots) {
        PtEntry e = summarize(PointType{std::move(r.node)}, n);
        if (e.C_irr >= t_half) trees.push_back(std::move(e));
      }
    }
    // Regular point types (bare partitions).
    std::vector<PtEntry> regs;
    {
      std::vector<std::vector<long long>> chains;
      std::vector<long long> cur;
      gen_chains(n, n, bounds.max_chain, cur, chains);
      for (auto& c : chains) {
        PtNode leaf;
        leaf.chain = std::move(c);
        regs.push_back(summarize(PointType{PtNode{{}, leaf.chain}}, n));
      }
    }
    auto desc = [](const PtEntry& a, const PtEntry& b) { return a.key > b.key; };
    std::sort(trees.begin(), trees.end(), desc);
    std::sort(regs.begin(), regs.end(), desc);

    // Suffix extrema for pruning (index i.. end).
    auto suffix_minmax = [](const std::vector<PtEntry>& v, bool irr_role) {
      std::vector<long long> mx(v.size() + 1, std::numeric_limits<long long>::min());
      std::vector<long long> mn(v.size() + 1, std::numeric_limits<long long>::max());
      for (int i = static_cast<int>(v.size()) - 1; i >= 0; --i) {
        long long c = irr_role ? v[i].C_irr : v[i].C_reg;
        mx[i] = std::max(mx[i + 1], c);
        mn[i] = std::min(mn[i + 1], c);
      }
      return std::make_pair(mn, mx);
    };
    auto [tree_min, tree_max] = suffix_minmax(trees, true);
    // Regular slots at i >= 1 use only reg_usable entries.
    std::vector<PtEntry> regs1;
    for (const auto& r : regs)
      if (r.reg_usable) regs1.push_back(r);
    auto [reg_min, reg_max] = suffix_minmax(regs1, false);

    // Exact-sum lookup for the final slot, and H/S suffix bounds for the
    // fundamental-set prune.
    std::map<long long, std::vector<size_t>> tree_bucket, reg_bucket;
    for (size_t i = 0; i < trees.size(); ++i) tree_bucket[trees[i].C_irr].push_back(i);
    for (size_t i = 0; i < regs1.size(); ++i) reg_bucket[regs1[i].C_reg].push_back(i);
    std::vector<long long> tree_minH(trees.size() + 1, std::numeric_limits<long long>::max());
    for (int i = static_cast<int>(trees.size()) - 1; i >= 0; --i)
      tree_minH[i] = std::min(tree_minH[i + 1], trees[i].H);
    long long max_S = 0;
    for (const auto& r : regs1) max_S = std::max(max_S, r.S);

    // Enumerates multisets of `count` regular points from regs1[from..] with
    // exact weight sum `need`, then finalizes the candidate.
    std::vector<Candidate> local;
    auto finalize = [&](std::vector<const PtEntry*>& picked, long long r_irr) {
      long long hsum = 0, ssum = 0;
      for (size_t pi = 0; pi < picked.size(); ++pi) {
        const bool irr_role = pi == 0 || !picked[pi]->regular;
        if (irr_role)
          hsum += picked[pi]->H;
        else
          ssum += picked[pi]->S;
      }
      // F~ tuple necessary condition.
      if (hsum > 2 * (r_irr - 1) * n + ssum) return;
      Candidate c;
      for (const auto* p : picked) c.points.push_back(p->pt);
      local.push_back(std::move(c));
    };

    std::function<void(size_t, int, long long, std::vector<const PtEntry*>&, long long)> pick_regs =
        [&](size_t from, int count, long long need, std::vector<const PtEntry*>& picked,
            long long r_irr) {
          if (count == 0) {
            if (need == 0) finalize(picked, r_irr);
            return;
          }
          if (count == 1) {
            auto it = reg_bucket.find(need);
            if (it == reg_bucket.end()) return;
            for (size_t i : it->second) {
              if (i < from) continue;
              picked.push_back(&regs1[i]);
              finalize(picked, r_irr);
              picked.pop_back();
            }
            return;
          }
          for (size_t i = from; i < regs1.size(); ++i) {
            long long c = regs1[i].C_reg;
            long long rest = need - c;
            int rem = count - 1;
            if (rest < rem * reg_min[i] || rest > rem * reg_max[i]) continue;
            picked.push_back(&regs1[i]);
            pick_regs(i, rem, rest, picked, r_irr);
            picked.pop_back();
          }
        };

    std::function<void(size_t, int, int, long long, long long, std::vector<const PtEntry*>&)>
        pick_trees = [&](size_t from, int more_trees, int g, long long need, long long hsum,
                         std::vector<const PtEntry*>& picked) {
          const long long r_irr = static_cast<long long>(picked.size()) + more_trees;
          // F~ tuple bound is monotone in the remaining tree picks.
          if (!trees.empty() && more_trees > 0 && from < trees.size()) {
            long long best = hsum + more_trees * tree_minH[from];
            if (best > 2 * (r_irr - 1) * n + g * max_S) return;
          }
          if (more_trees == 0) {
            pick_regs(0, g, need, picked, r_irr);
            return;
          }
          if (more_trees == 1 && g == 0) {
            auto it = tree_bucket.find(need);
            if (it == tree_bucket.end()) return;
            for (size_t i : it->second) {
              if (i < from) continue;
              if (hsum + trees[i].H > 2 * (r_irr - 1) * n) continue;
              picked.push_back(&trees[i]);
              finalize(picked, r_irr);
              picked.pop_back();
            }
            return;
          }
          for (size_t i = from; i < trees.size(); ++i) {
            long long c = trees[i].C_irr;
            long long rest = need - c;
            int remt = more_trees - 1;
            long long lo = remt * (remt ? tree_min[i] : 0) + g * (g ? reg_min[0] : 0);
            long long hi = remt * (remt ? tree_max[i] : 0) + g * (g ? reg_max[0] : 0);
            if (remt == 0 && g == 0) {
              if (rest != 0) continue;
            } else if (rest < lo || rest > hi) {
              continue;
            }
            picked.push_back(&trees[i]);
            pick_trees(i, remt, g, rest, hsum + trees[i].H, picked);
            picked.pop_back();
          }
        };

    for (int r = 1; r <= bounds.max_points; ++r) {
      for (int g = 0; r + g <= bounds.max_points; ++g) {
        if (g > 0 && regs1.empty()) continue;
        long long target = t_half + (r - 1) * n * n;
        std::vector<const PtEntry*> picked;
        // Case A: slot 0 irregular; r-1 further irregular points.
        pick_trees(0, r, g, target, 0, picked);
        // Case B: all points regular (slot 0 may have a length-1 chain).
        if (r == 1) {
          for (size_t i0 = 0; i0 < regs.size(); ++i0) {
            long long rest = target - regs[i0].C_irr;
            std::vector<const PtEntry*> picked2{&regs[i0]};
            // Remaining regular points must not outrank slot 0 canonically.
            size_t from = 0;
            while (from < regs1.size() && regs1[from].key > regs[i0].key) ++from;
            if (g == 0) {
              if (rest == 0) finalize(picked2, 1);
            } else {
              pick_regs(from, g, rest, picked2, 1);
            }
          }
        }
      }
    }
    if (std::getenv("SPECTRA_ENUM_DEBUG"))
      std::fprintf(stderr, "n=%lld trees=%zu regs=%zu candidates=%zu\n", n, trees.size(),
                   regs.size(), local.size());
    candidates.insert(candidates.end(), local.begin(), local.end());
  }

  // Filter candidates (the expensive part) either serially or with OpenMP;
  // the final set is order-independent.
  std::vector<std::optional<EnumEntry>> verified(candidates.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(candidates.size()); ++i)
      verified[i] = verify_candidate(candidates[i], idx);
  } else {
    for (size_t i = 0; i < candidates.size(); ++i) verified[i] = verify_candidate(candidates[i], idx);
  }

  std::set<std::string> seen;
  std::vector<EnumEntry> entries;
  for (auto& v : verified) {
    if (!v) continue;
    std::string s = print_spectral_type(v->st);
    if (seen.insert(s).second) entries.push_back(std::move(*v));
  }
  std::sort(entries.begin(), entries.end(), [](const EnumEntry& a, const EnumEntry& b) {
    if (a.shape_key != b.shape_key) return a.shape_key < b.shape_key;
    return print_spectral_type(a.st) < print_spectral_type(b.st);
  });
  result.types = std::move(entries);
  for (size_t i = 0; i < result.types.size(); ++i)
    result.by_shape[result.types[i].shape_key].push_back(static_cast<int>(i));
  return result;
}

// --- canonical shape ----------------------------------------------------------

namespace {

std::string serialize_key(const IntMat& adj, const IntMat& hnf, const IntVec& base) {
  std::ostringstream os;
  os << "A";
  for (const auto& row : adj)
    for (long long x : row) os << x << ",";
  os << "|K";
  os << hnf.size() << "x" << (hnf.empty() ? 0 : hnf[0].size()) << ":";
  for (const auto& row : hnf)
    for (long long x : row) os << x << ",";
  os << "|b";
  for (long long x : base) os << x << ",";
  return os.str();
}

}  // namespace

std::string canonical_shape(const Shape& s) {
  const int n = s.size();
  if (n > 14) throw std::invalid_argument("canonical_shape: more than 14 nodes");

  // Node invariants: degree signature plus any basis-independent form data
  // (parameter-free nodes expose their constant coefficient).
  std::vector<std::string> inv(n);
  for (int u = 0; u < n; ++u) {
    std::vector<long long> degs;
    for (int v = 0; v < n; ++v)
      if (v != u && s.gram[u][v] != 0) degs.push_back(-s.gram[u][v]);
    std::sort(degs.begin(), degs.end());
    bool param_free = true;
    for (long long c : s.coeff_params[u]) param_free &= (c == 0);
    std::ostringstream os;
    os << (param_free ? s.coeff_base[u] : std::numeric_limits<long long>::min()) << "#";
    for (long long d : degs) os << d << ",";
    inv[u] = os.str();
  }
  // A few Weisfeiler-Leman refinement rounds to split classes.
  for (int round = 0; round < 3; ++round) {
    std::vector<std::string> nxt(n);
    for (int u = 0; u < n; ++u) {
      std::vector<std::string> nb;
      for (int v = 0; v < n; ++v)
        if (v != u && s.gram[u][v] != 0)
          nb.push_back(std::to_string(-s.gram[u][v]) + ":" + inv[v]);
      std::sort(nb.begin(), nb.end());
      std::string acc = inv[u] + "/";
      for (auto& x : nb) acc += x + ";";
      nxt[u] = std::move(acc);
    }
    inv = std::move(nxt);
  }

  // Order nodes into classes; candidate labelings permute within classes.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (inv[a] != inv[b]) return inv[a] < inv[b];
    return a < b;
  });
  std::vector<std::pair<int, int>> classes;  // [start, end) in `order`
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && inv[order[j]] == inv[order[i]]) ++j;
    classes.emplace_back(i, j);
    i = j;
  }

  std::string best;
  std::vector<int> perm = order;
  // Odometer over per-class permutations of `order`.
  std::vector<std::vector<int>> class_perms;
  long long total = 1;
  for (auto [a, b] : classes) {
    std::vector<int> ids(order.begin() + a, order.begin() + b);
    std::sort(ids.begin(), ids.end());
    class_perms.push_back(ids);
    for (int f = 2; f <= b - a; ++f) total *= f;
    if (total > 2'000'000) throw std::invalid_argument("canonical_shape: symmetry class too large");
  }

  std::function<void(size_t)> walk = [&](size_t ci) {
    if (ci == classes.size()) {
      // perm maps position -> node id.
      IntMat adj(n, IntVec(n, 0));
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) adj[u][v] = (u == v) ? 0 : -s.gram[perm[u]][perm[v]];
      IntMat K(n, IntVec(s.n_params, 0));
      IntVec base(n, 0);
      for (int u = 0; u < n; ++u) {
        base[u] = s.coeff_base[perm[u]];
        for (int p = 0; p < s.n_params; ++p) K[u][p] = s.coeff_params[perm[u]][p];
      }
      IntMat H = hermite_normal_form(K);
      IntVec bred = reduce_mod_lattice(base, H);
      std::string key = serialize_key(adj, H, bred);
      if (best.empty() || key < best) best = key;
      return;
    }
    auto [a, b] = classes[ci];
    std::vector<int> ids = class_perms[ci];
    do {
      for (int i = a; i < b; ++i) perm[i] = ids[i - a];
      walk(ci + 1);
    } while (std::next_permutation(ids.begin(), ids.end()));
  };
  walk(0);
  return best;
}

// --- W^inv recognition ----------------------------------------------------------

namespace {

// Elimination-based inertia for a symmetric integer Gram with diagonal 2:
// returns (is_positive_semidefinite, corank).
std::pair<bool, int> psd_corank(const std::vector<std::vector<Rat>>& g) {
  const int n = static_cast<int>(g.size());
  std::vector<std::vector<Rat>> m = g;
  int corank = 0;
  std::vector<char> done(n, 0);
  for (int step = 0; step < n; ++step) {
    int piv = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && m[i][i] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) {
      // All remaining diagonals zero: PSD requires the rows to vanish.
      for (int i = 0; i < n; ++i)
        if (!done[i]) {
          for (int j = 0; j < n; ++j)
            if (!done[j] && m[i][j] != 0) return {false, 0};
          ++corank;
          done[i] = 1;
        }
      break;
    }
    if (m[piv][piv] < 0) return {false, 0};
    for (int i = 0; i < n; ++i) {
      if (done[i] || i == piv || m[i][piv] == 0) continue;
      Rat f = m[i][piv] / m[piv][piv];
      for (int j = 0; j < n; ++j)
        if (!done[j]) m[i][j] -= f * m[piv][j];
    }
    done[piv] = 1;
  }
  return {true, corank};
}

struct Component {
  std::vector<int> nodes;                  // indices into the generator list
  std::vector<std::vector<long long>> gram;
};

std::string classify_component(const Component& comp) {
  const int n = static_cast<int>(comp.nodes.size());
  std::vector<std::vector<Rat>> g(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g[i][j] = Rat(comp.gram[i][j]);
  auto [psd, corank] = psd_corank(g);
  if (!psd || corank > 1)
    throw MathError("W^inv component is neither finite nor affine");

  auto deg = [&](int u) {
    int d = 0;
    for (int v = 0; v < n; ++v)
      if (v != u && comp.gram[u][v] != 0) ++d;
    return d;
  };
  auto arm_lengths = [&](int center) {
    std::vector<int> arms;
    for (int v = 0; v < n; ++v) {
      if (v == center || comp.gram[center][v] == 0) continue;
      int len = 1, prev = center, cur = v;
      for (;;) {
        int nxt = -1;
        for (int w = 0; w < n; ++w)
          if (w != prev && w != cur && comp.gram[cur][w] != 0) nxt = w;
        if (nxt < 0) break;
        prev = cur;
        cur = nxt;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    return arms;
  };

  if (corank == 0) {
    // Finite: positive definite Gram is automatically a simply-laced tree.
    std::vector<int> deg3;
    for (int u = 0; u < n; ++u)
      if (deg(u) >= 3) deg3.push_back(u);
    if (deg3.empty()) return "A" + std::to_string(n);
    auto arms = arm_lengths(deg3[0]);
    if (arms.size() == 3 && arms[0] == 1 && arms[1] == 1) return "D" + std::to_string(n);
    if (arms == std::vector<int>{1, 2, 2}) return "E6";
    if (arms == std::vector<int>{1, 2, 3}) return "E7";
    if (arms == std::vector<int>{1, 2, 4}) return "E8";
    throw MathError("unrecognized finite diagram");
  }
  // Affine, corank 1.
  if (n == 2 && comp.gram[0][1] == -2) return "A1(1)";
  bool simple = true;
  for (int u = 0; u < n && simple; ++u)
    for (int v = u + 1; v < n; ++v)
      if (comp.gram[u][v] < -1) simple = false;
  if (simple) {
    std::vector<int> deg3, deg4;
    bool all2 = true;
    for (int u = 0; u < n; ++u) {
      int d = deg(u);
      if (d >= 4) deg4.push_back(u);
      else if (d == 3) deg3.push_back(u);
      if (d != 2) all2 = false;
    }
    if (all2) return "A" + std::to_string(n - 1) + "(1)";  // cycle
    if (!deg4.empty() && n == 5) return "D4(1)";
    if (deg3.size() == 2) return "D" + std::to_string(n - 1) + "(1)";
    if (deg3.size() == 1) {
      auto arms = arm_lengths(deg3[0]);
      if (arms == std::vector<int>{2, 2, 2}) return "E6(1)";
      if (arms == std::vector<int>{1, 3, 3}) return "E7(1)";
      if (arms == std::vector<int>{1, 2, 5}) return "E8(1)";
    }
  }
  throw MathError("unrecognized affine diagram");
}

// Component sort: larger rank first, then family E > D > A, affine last.
int family_weight(const std::string& label) {
  int w = 0;
  if (label[0] == 'E') w = 2;
  else if (label[0] == 'D') w = 1;
  return w;
}

}  // namespace

std::string winv_of(const SpectralType& st) {
  auto model = quiver_model(st);
  LiftLattice ll = lift_lattice(st, model.alpha);
  std::vector<int> fixing;
  for (size_t g = 0; g < ll.gens.size(); ++g) {
    long long pairing;
    if (ll.gens[g].is_tuple)
      pairing = pair_tuple(model, model.alpha, JTuple{ll.gens[g].jchoice});
    else
      pairing = pair_simple(model.q, model.alpha, *model.q.index_of(ll.gens[g].leg));
    if (pairing == 0) fixing.push_back(static_cast<int>(g));
  }
  if (fixing.empty()) return "";

  // Connected components of the fixing sub-diagram.
  const int k = static_cast<int>(fixing.size());
  std::vector<int> comp_id(k, -1);
  std::vector<Component> comps;
  for (int i = 0; i < k; ++i) {
    if (comp_id[i] >= 0) continue;
    std::vector<int> stack{i}, members;
    comp_id[i] = static_cast<int>(comps.size());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (int v = 0; v < k; ++v)
        if (comp_id[v] < 0 && ll.gram[fixing[u]][fixing[v]] != 0) {
          comp_id[v] = comp_id[i];
          stack.push_back(v);
        }
    }
    Component c;
    c.nodes = members;
    const int m = static_cast<int>(members.size());
    c.gram.assign(m, std::vector<long long>(m, 0));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) c.gram[a][b] = ll.gram[fixing[members[a]]][fixing[members[b]]];
    comps.push_back(std::move(c));
  }

  std::vector<std::string> labels;
  for (const auto& c : comps) labels.push_back(classify_component(c));
  std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
    auto rank_of = [](const std::string& s) {
      size_t i = 1, v = 0;
      while (i < s.size() && isdigit(s[i])) v = v * 10 + (s[i++] - '0');
      return v;
    };
    bool aff_a = a.find("(1)") != std::string::npos, aff_b = b.find("(1)") != std::string::npos;
    if (aff_a != aff_b) return aff_b;
    if (rank_of(a) != rank_of(b)) return rank_of(a) > rank_of(b);
    if (family_weight(a) != family_weight(b)) return family_weight(a) > family_weight(b);
    return a < b;
  });
  std::string out;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (i) out += "x";
    out += labels[i];
  }
  return out;
}

// --- fixtures -------------------------------------------------------------------

nlohmann::json EnumerationResult::to_json() const {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& [key, idxs] : by_shape) {
    nlohmann::json g;
    g["shape"] = types[idxs[0]].shape.to_json();
    g["winv"] = types[idxs[0]].winv;
    nlohmann::json sts = nlohmann::json::array();
    for (int i : idxs) sts.push_back(print_spectral_type(types[i].st));
    g["spectral_types"] = sts;
    groups.push_back(g);
  }
  return nlohmann::json{
      {"idx", idx}, {"bounds", bounds.to_json()}, {"n_types", types.size()}, {"shapes", groups}};
}

nlohmann::json FixtureTable::to_json() const {
  nlohmann::json es = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json je = e.shape.to_json();
    je["name"] = e.name;
    je["spectral_types"] = e.spectral_types;
    je["winv"] = e.winv;
    es.push_back(je);
  }
  return nlohmann::json{{"idx", idx}, {"entries", es}};
}

FixtureTable FixtureTable::from_json(const nlohmann::json& j) {
  FixtureTable t;
  t.idx = j.at("idx");
  for (const auto& je : j.at("entries")) {
    FixtureEntry e;
    e.name = je.at("name");
    e.shape = Shape::from_json(je);
    e.spectral_types = je.at("spectral_types").get<std::vector<std::string>>();
    e.winv = je.at("winv");
    t.entries.push_back(std::move(e));
  }
  return t;
}

FixtureDiff compare_with_fixture(const EnumerationResult& result, const FixtureTable& fixture) {
  FixtureDiff diff;
  std::map<std::string, std::string> fixture_keys;  // canonical key -> name
  for (const auto& e : fixture.entries) fixture_keys[canonical_shape(e.shape)] = e.name;
  std::set<std::string> result_keys;
  for (const auto& [key, idxs] : result.by_shape) result_keys.insert(key);
  for (const auto& [key, name] : fixture_keys) {
    if (result_keys.count(key))
      ++diff.matched;
    else
      diff.missing.push_back(name);
  }
  for (const auto& key : result_keys)
    if (!fixture_keys.count(key)) {
      const auto& idxs = result.by_shape.at(key);
      diff.extra.push_back(print_spectral_type(result.types[idxs[0]].st));
    }
  return diff;
}

nlohmann::json FixtureDiff::to_json() const {
  return nlohmann::json{{"matched", matched}, {"missing", missing}, {"extra", extra}};
}

}  // namespace spectra
