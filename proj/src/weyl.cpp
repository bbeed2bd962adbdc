#include "spectra/weyl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "spectra/errors.hpp"

namespace spectra {

std::string JTuple::str() const {
  std::string s = "(";
  for (size_t i = 0; i < j.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(j[i]);
  }
  return s + ")";
}

std::vector<JTuple> all_tuples(const QuiverModel& m) {
  std::vector<JTuple> out;
  const int np = m.num_points();
  std::vector<int> cur(np, 1);
  for (;;) {
    out.push_back(JTuple{cur});
    int i = np - 1;
    for (; i >= 0; --i) {
      const int mi = m.is_irr[i] ? m.st.points[i].num_blocks() : 1;
      if (cur[i] < mi) {
        ++cur[i];
        break;
      }
      cur[i] = 1;
    }
    if (i < 0) break;
  }
  return out;
}

namespace {
void check_tuple(const QuiverModel& m, const JTuple& t) {
  if (static_cast<int>(t.j.size()) != m.num_points()) throw std::invalid_argument("tuple arity mismatch");
  for (int i = 0; i < m.num_points(); ++i) {
    const int mi = m.is_irr[i] ? m.st.points[i].num_blocks() : 1;
    if (t.j[i] < 1 || t.j[i] > mi) throw std::invalid_argument("tuple block choice out of range");
  }
}
}  // namespace

DimVector epsilon_of(const QuiverModel& m, const JTuple& t) {
  check_tuple(m, t);
  DimVector e(m.q.size(), 0);
  for (int i = 0; i < m.num_points(); ++i)
    if (m.is_irr[i]) e[m.irr_vertex[i][t.j[i] - 1]] = 1;
  return e;
}

long long pair_tuple(const QuiverModel& m, const DimVector& a, const JTuple& t) {
  check_tuple(m, t);
  long long r = 0;
  for (int i = 0; i < m.num_points(); ++i)
    if (m.is_irr[i]) r += pair_simple(m.q, a, m.irr_vertex[i][t.j[i] - 1]);
  return r;
}

Rat lambda_tuple(const QuiverModel& m, const ParamVector& l, const JTuple& t) {
  check_tuple(m, t);
  Rat r = 0;
  for (int i = 0; i < m.num_points(); ++i)
    if (m.is_irr[i]) r += l[m.irr_vertex[i][t.j[i] - 1]];
  return r;
}

DimVector mc_reflect_dim(const QuiverModel& m, const JTuple& t, const DimVector& a) {
  long long p = pair_tuple(m, a, t);
  DimVector r = a;
  for (int i = 0; i < m.num_points(); ++i)
    if (m.is_irr[i]) r[m.irr_vertex[i][t.j[i] - 1]] -= p;
  return r;
}

ParamVector mc_reflect_param(const QuiverModel& m, const JTuple& t, const ParamVector& l) {
  check_tuple(m, t);
  if (static_cast<int>(l.size()) != m.q.size()) throw std::invalid_argument("lambda size mismatch");
  Rat mu = lambda_tuple(m, l, t);
  ParamVector r = l;
  for (int i = 0; i < m.num_points(); ++i) {
    const auto& p = m.st.points[i];
    const int ji = t.j[i];
    if (m.is_irr[i]) {
      for (int j = 1; j <= p.num_blocks(); ++j) {
        if (j == ji) continue;
        long long shift = p.d(j - 1, ji - 1) + (i == 0 ? 0 : 2);
        r[m.irr_vertex[i][j - 1]] += Rat(shift) * mu;
      }
      if (i == 0) r[m.irr_vertex[0][ji - 1]] -= 2 * mu;
    }
    if (!m.leg_vertex[i][ji - 1].empty()) r[m.leg_vertex[i][ji - 1][0]] += mu;
  }
  return r;
}

bool is_balanced(const QuiverModel& m, const DimVector& a) {
  long long s0 = 0;
  for (int j = 0; j < m.st.points[0].num_blocks(); ++j) s0 += a[m.irr_vertex[0][j]];
  for (int i = 1; i < m.num_points(); ++i) {
    if (!m.is_irr[i]) continue;
    long long si = 0;
    for (int j = 0; j < m.st.points[i].num_blocks(); ++j) si += a[m.irr_vertex[i][j]];
    if (si != s0) return false;
  }
  return true;
}

bool is_in_L_fundamental(const QuiverModel& m, const DimVector& a) {
  if (static_cast<int>(a.size()) != m.q.size()) throw std::invalid_argument("size mismatch");
  bool nz = false;
  for (long long x : a) {
    if (x < 0) return false;
    nz |= x > 0;
  }
  if (!nz || !is_balanced(m, a)) return false;
  for (const auto& t : all_tuples(m))
    if (pair_tuple(m, a, t) > 0) return false;
  for (int v = 0; v < m.q.size(); ++v)
    if (m.q.tag(v).kind == VertexTag::Leg && pair_simple(m.q, a, v) > 0) return false;
  return support_connected(m.q, a);
}

// --- Sigma membership --------------------------------------------------------

nlohmann::json SigmaVerdict::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (const auto& b : witness) w.push_back(b);
  return nlohmann::json{{"member", member}, {"failed_clause", failed_clause}, {"witness", w}};
}

namespace {

struct DecompSearch {
  const std::vector<DimVector>& cands;
  const std::vector<long long>& pvals;
  const DimVector& target;
  long long p_target;

  // Finds the lexicographically least decomposition (as a non-decreasing
  // index sequence) violating p(target) > sum p(parts); candidates are in
  // ascending lexicographic order so DFS order = sequence order.
  bool dfs(size_t first, DimVector& rest, long long psum, size_t depth,
           std::vector<size_t>& stack, std::vector<size_t>& out) const {
    bool all_zero = std::all_of(rest.begin(), rest.end(), [](long long x) { return x == 0; });
    if (all_zero) {
      if (depth >= 2 && !(p_target > psum)) {
        out = stack;
        return true;
      }
      return false;
    }
    for (size_t c = first; c < cands.size(); ++c) {
      bool fits = true;
      for (size_t v = 0; v < rest.size(); ++v)
        if (cands[c][v] > rest[v]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (size_t v = 0; v < rest.size(); ++v) rest[v] -= cands[c][v];
      stack.push_back(c);
      if (dfs(c, rest, psum + pvals[c], depth + 1, stack, out)) {
        stack.pop_back();
        for (size_t v = 0; v < rest.size(); ++v) rest[v] += cands[c][v];
        return true;
      }
      stack.pop_back();
      for (size_t v = 0; v < rest.size(); ++v) rest[v] += cands[c][v];
    }
    return false;
  }
};

}  // namespace

SigmaVerdict sigma_membership(const QuiverModel& m, const ParamVector& l, const DimVector& a,
                              SigmaMode mode, bool parallel) {
  if (static_cast<int>(a.size()) != m.q.size() || static_cast<int>(l.size()) != m.q.size())
    throw std::invalid_argument("size mismatch");
  bool nz = false;
  for (long long x : a) {
    if (x < 0) throw std::invalid_argument("sigma_membership: non-positive input");
    nz |= x > 0;
  }
  if (!nz) throw std::invalid_argument("sigma_membership: zero input");

  SigmaVerdict v;
  if (classify_root(m.q, a) == RootKind::NotRoot ||
      (mode == SigmaMode::Dif && !is_balanced(m, a))) {
    v.failed_clause = 1;
    return v;
  }
  if (dot(l, a) != 0) {
    v.failed_clause = 2;
    return v;
  }

  // Candidate parts: 0 < beta <= a, positive root, lambda.beta = 0,
  // balanced in Dif mode. Enumerated over the coordinate box.
  long long box = 1;
  for (long long x : a) {
    box *= (x + 1);
    if (box > 4'000'000) throw std::invalid_argument("sigma_membership: box too large");
  }
  std::vector<DimVector> cands;
  std::vector<long long> pvals;
  DimVector beta(a.size(), 0);
  for (long long code = 1; code < box; ++code) {
    long long c = code;
    for (size_t i = 0; i < a.size(); ++i) {
      beta[i] = c % (a[i] + 1);
      c /= (a[i] + 1);
    }
    if (mode == SigmaMode::Dif && !is_balanced(m, beta)) continue;
    if (dot(l, beta) != 0) continue;
    if (classify_root(m.q, beta) == RootKind::NotRoot) continue;
    cands.push_back(beta);
    pvals.push_back(p_val(m.q, beta));
  }
  std::sort(cands.begin(), cands.end());  // ascending lexicographic
  {
    // Keep pvals aligned after the sort.
    std::vector<long long> pv(cands.size());
    for (size_t i = 0; i < cands.size(); ++i) pv[i] = p_val(m.q, cands[i]);
    pvals = std::move(pv);
  }

  const long long pt = p_val(m.q, a);
  DecompSearch search{cands, pvals, a, pt};

  std::vector<size_t> found;
  bool any = false;
  if (!parallel) {
    DimVector rest = a;
    std::vector<size_t> stack;
    any = search.dfs(0, rest, 0, 0, stack, found);
  } else {
    // Parallel over the first part; the winner is the smallest first index,
    // which is exactly the serial DFS answer.
    std::vector<std::vector<size_t>> hits(cands.size());
    std::vector<char> hit(cands.size(), 0);
#pragma omp parallel for schedule(dynamic)
    for (long long c0 = 0; c0 < static_cast<long long>(cands.size()); ++c0) {
      DimVector rest = a;
      bool fits = true;
      for (size_t v2 = 0; v2 < rest.size(); ++v2)
        if (cands[c0][v2] > rest[v2]) {
          fits = false;
          break;
        }
      if (!fits) continue;
      for (size_t v2 = 0; v2 < rest.size(); ++v2) rest[v2] -= cands[c0][v2];
      std::vector<size_t> stack{static_cast<size_t>(c0)}, out;
      if (search.dfs(c0, rest, pvals[c0], 1, stack, out)) {
        hits[c0] = out;
        hit[c0] = 1;
      }
    }
    for (size_t c0 = 0; c0 < cands.size(); ++c0)
      if (hit[c0]) {
        found = hits[c0];
        any = true;
        break;
      }
  }

  if (any) {
    v.failed_clause = 3;
    for (size_t idx : found) v.witness.push_back(cands[idx]);
    return v;
  }
  v.member = true;
  return v;
}

// --- Reduction ----------------------------------------------------------------

nlohmann::json ReductionTrace::to_json() const {
  nlohmann::json word = nlohmann::json::array();
  for (const auto& s : steps) {
    if (s.is_tuple) {
      word.push_back({{"kind", "J"}, {"tuple", s.tuple.j}});
    } else {
      word.push_back({{"kind", "leg"}, {"i", s.leg.i}, {"j", s.leg.j}, {"k", s.leg.k}});
    }
  }
  std::vector<std::string> lam;
  for (const auto& x : lambda_out) lam.push_back(rat_to_string(x));
  std::string term = terminal == Terminal::Fundamental ? "fundamental"
                     : terminal == Terminal::RealRoot  ? "real_root"
                                                       : "stuck";
  nlohmann::json j{{"word", word}, {"terminal", term}, {"alpha", alpha_out}, {"lambda", lam}};
  if (terminal == Terminal::Stuck) j["stuck_reason"] = stuck_reason;
  return j;
}

ReductionTrace reduce_to_fundamental(const QuiverModel& m, const ParamVector& l,
                                     const DimVector& a) {
  ReductionTrace tr;
  tr.alpha_in = a;
  tr.lambda_in = l;
  DimVector cur = a;
  ParamVector lam = l;
  const auto tuples = all_tuples(m);

  for (int iter = 0;; ++iter) {
    if (iter > 100000) {
      tr.terminal = ReductionTrace::Terminal::Stuck;
      tr.stuck_reason = "iteration cap exceeded";
      break;
    }
    bool neg = std::any_of(cur.begin(), cur.end(), [](long long x) { return x < 0; });
    if (neg) {
      tr.terminal = ReductionTrace::Terminal::Stuck;
      tr.stuck_reason = "left the positive cone";
      break;
    }
    bool is_eps = false;
    for (const auto& t : tuples)
      if (cur == epsilon_of(m, t)) {
        is_eps = true;
        break;
      }
    if (is_eps) {
      tr.terminal = ReductionTrace::Terminal::RealRoot;
      break;
    }
    if (is_in_L_fundamental(m, cur)) {
      tr.terminal = ReductionTrace::Terminal::Fundamental;
      break;
    }

    // Candidate generators with positive pairing, maximal pairing first,
    // generator order (tuples then legs) breaking ties; lambda_g must be
    // nonzero for the moduli-level reflection to exist.
    long long best_pair = 0;
    int best_kind = -1;  // 0 tuple, 1 leg
    size_t best_idx = 0;
    bool positive_exists = false;
    for (size_t ti = 0; ti < tuples.size(); ++ti) {
      long long p = pair_tuple(m, cur, tuples[ti]);
      if (p <= 0) continue;
      positive_exists = true;
      if (lambda_tuple(m, lam, tuples[ti]) == 0) continue;
      if (p > best_pair) {
        best_pair = p;
        best_kind = 0;
        best_idx = ti;
      }
    }
    for (int v = 0; v < m.q.size(); ++v) {
      if (m.q.tag(v).kind != VertexTag::Leg) continue;
      long long p = pair_simple(m.q, cur, v);
      if (p <= 0) continue;
      positive_exists = true;
      if (lam[v] == 0) continue;
      if (p > best_pair) {
        best_pair = p;
        best_kind = 1;
        best_idx = static_cast<size_t>(v);
      }
    }
    if (best_kind < 0) {
      tr.terminal = ReductionTrace::Terminal::Stuck;
      tr.stuck_reason = positive_exists ? "every applicable generator has lambda_g = 0"
                                        : "no generator with positive pairing";
      break;
    }

    ReductionStep step;
    step.pairing = best_pair;
    if (best_kind == 0) {
      step.is_tuple = true;
      step.tuple = tuples[best_idx];
      cur = mc_reflect_dim(m, step.tuple, cur);
      lam = mc_reflect_param(m, step.tuple, lam);
    } else {
      step.is_tuple = false;
      step.leg = m.q.tag(static_cast<int>(best_idx));
      cur = simple_reflection(m.q, static_cast<int>(best_idx), cur);
      lam = lambda_reflection(m.q, static_cast<int>(best_idx), lam);
    }
    step.alpha_after = cur;
    step.lambda_after = lam;
    tr.steps.push_back(std::move(step));
  }
  tr.alpha_out = cur;
  tr.lambda_out = lam;
  return tr;
}

bool is_fractional(const QuiverModel& m, const ParamVector& l) {
  const auto tuples = all_tuples(m);
  std::set<ParamVector> seen;
  std::vector<ParamVector> queue{l};
  seen.insert(l);
  size_t qi = 0;
  while (qi < queue.size()) {
    if (seen.size() > 1000000) throw MathError("fractionality orbit cap exceeded");
    ParamVector cur = queue[qi++];
    for (const auto& t : tuples)
      if (is_integer(lambda_tuple(m, cur, t))) return false;
    for (int v = 0; v < m.q.size(); ++v) {
      if (m.q.tag(v).kind != VertexTag::Leg) continue;
      ParamVector nxt = lambda_reflection(m.q, v, cur);
      if (seen.insert(nxt).second) queue.push_back(std::move(nxt));
    }
  }
  return true;
}

bool has_fractional_reduction(const QuiverModel& m, const ParamVector& l, const DimVector& a) {
  if (!is_fractional(m, l)) return false;
  ReductionTrace tr = reduce_to_fundamental(m, l, a);
  if (tr.terminal == ReductionTrace::Terminal::Stuck) return false;
  for (const auto& s : tr.steps)
    if (!is_fractional(m, s.lambda_after)) return false;
  return true;
}

std::pair<ParamVector, DimVector> transform_spectral_data(const QuiverModel& m, const JTuple& t,
                                                          const ParamVector& l, const DimVector& a) {
  if (lambda_tuple(m, l, t) == 0)
    throw MathError("lambda_i = 0: reflection undefined on the moduli level");
  return {mc_reflect_param(m, t, l), mc_reflect_dim(m, t, a)};
}

}  // namespace spectra
