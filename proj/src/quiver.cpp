#include "spectra/quiver.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spectra {

std::string VertexTag::str() const {
  if (kind == Irr) return "[" + std::to_string(i) + "," + std::to_string(j) + "]";
  return "[" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + "]";
}

Quiver::Quiver(std::vector<VertexTag> vertices) : vertices_(std::move(vertices)) {
  std::set<VertexTag> seen(vertices_.begin(), vertices_.end());
  if (seen.size() != vertices_.size()) throw std::invalid_argument("duplicate vertex tag");
  for (const auto& t : vertices_) {
    // A tag may not name both an [i,j] node and an [i,j,k] node; the tag kind
    // already separates them, so only the per-kind duplicates above can clash.
    if (t.kind == VertexTag::Leg && t.k < 1) throw std::invalid_argument("leg depth must be >= 1");
  }
  arrows_.assign(vertices_.size(), std::vector<long long>(vertices_.size(), 0));
}

std::optional<int> Quiver::index_of(const VertexTag& t) const {
  for (int v = 0; v < size(); ++v)
    if (vertices_[v] == t) return v;
  return std::nullopt;
}

void Quiver::add_arrows(int src, int dst, long long mult) {
  if (src < 0 || src >= size() || dst < 0 || dst >= size())
    throw std::out_of_range("arrow endpoint out of range");
  if (mult < 0) throw std::invalid_argument("negative arrow multiplicity");
  arrows_[src][dst] += mult;
}

long long Quiver::total_arrows() const {
  long long n = 0;
  for (const auto& row : arrows_)
    for (long long m : row) n += m;
  return n;
}

nlohmann::json Quiver::to_json() const {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& t : vertices_) {
    nlohmann::json v;
    if (t.kind == VertexTag::Irr) {
      v["tag"] = "irr";
      v["i"] = t.i;
      v["j"] = t.j;
    } else {
      v["tag"] = "leg";
      v["i"] = t.i;
      v["j"] = t.j;
      v["k"] = t.k;
    }
    verts.push_back(v);
  }
  nlohmann::json arr = nlohmann::json::array();
  for (int s = 0; s < size(); ++s)
    for (int t = 0; t < size(); ++t)
      if (arrows_[s][t] != 0) arr.push_back({{"src", s}, {"dst", t}, {"mult", arrows_[s][t]}});
  return nlohmann::json{{"vertices", verts}, {"arrows", arr}};
}

Quiver Quiver::from_json(const nlohmann::json& j) {
  std::vector<VertexTag> tags;
  for (const auto& v : j.at("vertices")) {
    std::string kind = v.at("tag");
    if (kind == "irr")
      tags.push_back(VertexTag::irr(v.at("i"), v.at("j")));
    else if (kind == "leg")
      tags.push_back(VertexTag::leg(v.at("i"), v.at("j"), v.at("k")));
    else
      throw std::invalid_argument("unknown vertex tag kind: " + kind);
  }
  Quiver q(std::move(tags));
  for (const auto& a : j.at("arrows")) q.add_arrows(a.at("src"), a.at("dst"), a.at("mult"));
  return q;
}

namespace {
void check_size(const Quiver& q, const DimVector& a) {
  if (static_cast<int>(a.size()) != q.size()) throw std::invalid_argument("vector/quiver size mismatch");
}
void check_size(const Quiver& q, const ParamVector& a) {
  if (static_cast<int>(a.size()) != q.size()) throw std::invalid_argument("vector/quiver size mismatch");
}
}  // namespace

long long euler_form(const Quiver& q, const DimVector& a, const DimVector& b) {
  check_size(q, a);
  check_size(q, b);
  long long r = 0;
  for (int v = 0; v < q.size(); ++v) r += a[v] * b[v];
  for (int s = 0; s < q.size(); ++s)
    for (int t = 0; t < q.size(); ++t)
      if (long long m = q.arrows(s, t)) r -= m * a[s] * b[t];
  return r;
}

long long sym_form(const Quiver& q, const DimVector& a, const DimVector& b) {
  return euler_form(q, a, b) + euler_form(q, b, a);
}

long long tits_q(const Quiver& q, const DimVector& a) {
  long long s = sym_form(q, a, a);
  // (a,a) is even by symmetry of the form.
  return s / 2;
}

long long p_val(const Quiver& q, const DimVector& a) { return 1 - tits_q(q, a); }

long long pair_simple(const Quiver& q, const DimVector& a, int v) {
  check_size(q, a);
  long long r = 2 * a[v] - 2 * q.arrows(v, v) * a[v];
  for (int u = 0; u < q.size(); ++u)
    if (u != v) r -= q.edges(u, v) * a[u];
  return r;
}

Rat pair_simple(const Quiver& q, const ParamVector& l, int v) {
  check_size(q, l);
  Rat r = Rat(2 - 2 * q.arrows(v, v)) * l[v];
  for (int u = 0; u < q.size(); ++u)
    if (u != v) r -= Rat(q.edges(u, v)) * l[u];
  return r;
}

DimVector simple_reflection(const Quiver& q, int v, const DimVector& a) {
  if (q.has_loop(v)) throw std::invalid_argument("reflection at edge-loop vertex " + q.tag(v).str());
  DimVector r = a;
  r[v] -= pair_simple(q, a, v);
  return r;
}

ParamVector lambda_reflection(const Quiver& q, int v, const ParamVector& l) {
  if (q.has_loop(v)) throw std::invalid_argument("reflection at edge-loop vertex " + q.tag(v).str());
  check_size(q, l);
  ParamVector r = l;
  // r_v(l)_b = l_b - (eps_v, eps_b) l_v; (eps_v,eps_v)=2, (eps_v,eps_b)=-#edges.
  for (int b = 0; b < q.size(); ++b) {
    long long pair = (b == v) ? 2 : -q.edges(v, b);
    r[b] -= Rat(pair) * l[v];
  }
  return r;
}

Rat dot(const ParamVector& l, const DimVector& a) {
  if (l.size() != a.size()) throw std::invalid_argument("vector size mismatch");
  Rat r = 0;
  for (size_t i = 0; i < l.size(); ++i) r += l[i] * Rat(a[i]);
  return r;
}

bool support_connected(const Quiver& q, const DimVector& v) {
  check_size(q, v);
  for (long long x : v)
    if (x < 0) throw std::invalid_argument("support_connected: negative entry");
  std::vector<int> supp;
  for (int u = 0; u < q.size(); ++u)
    if (v[u] != 0) supp.push_back(u);
  if (supp.empty()) return false;
  std::vector<char> vis(q.size(), 0);
  std::vector<int> stack{supp[0]};
  vis[supp[0]] = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : supp)
      if (!vis[w] && q.edges(u, w) != 0) {
        vis[w] = 1;
        stack.push_back(w);
      }
  }
  return std::all_of(supp.begin(), supp.end(), [&](int u) { return vis[u]; });
}

bool is_in_fundamental_set(const Quiver& q, const DimVector& v) {
  check_size(q, v);
  bool nonzero = false;
  for (long long x : v) {
    if (x < 0) throw std::invalid_argument("fundamental set: negative entry");
    if (x > 0) nonzero = true;
  }
  if (!nonzero) throw std::invalid_argument("fundamental set: zero vector");
  for (int u = 0; u < q.size(); ++u)
    if (!q.has_loop(u) && pair_simple(q, v, u) > 0) return false;
  return support_connected(q, v);
}

RootKind classify_root(const Quiver& q, const DimVector& v) {
  check_size(q, v);
  bool pos = false, neg = false;
  for (long long x : v) {
    pos |= x > 0;
    neg |= x < 0;
  }
  if (!pos && !neg) throw std::invalid_argument("classify_root: zero vector");
  if (pos && neg) return RootKind::NotRoot;
  DimVector w = v;
  if (neg)
    for (auto& x : w) x = -x;

  for (;;) {
    if (!support_connected(q, w)) return RootKind::NotRoot;
    // +-eps_a at a loop-free vertex is a real root; at a loop vertex it lies
    // in F and falls through to the imaginary branch.
    int nz = 0, last = -1;
    for (int u = 0; u < q.size(); ++u)
      if (w[u] != 0) {
        ++nz;
        last = u;
      }
    if (nz == 1 && w[last] == 1 && !q.has_loop(last)) return RootKind::RealRoot;

    int best = -1;
    long long best_pair = 0;
    for (int u = 0; u < q.size(); ++u) {
      if (q.has_loop(u)) continue;
      long long p = pair_simple(q, w, u);
      if (p > best_pair) {
        best_pair = p;
        best = u;
      }
    }
    if (best < 0) return RootKind::ImaginaryRoot;  // in F
    w = simple_reflection(q, best, w);
    for (long long x : w)
      if (x < 0) return RootKind::NotRoot;  // left the positive cone
    // Height strictly decreased; loop terminates.
  }
}

std::string to_string(RootKind k) {
  switch (k) {
    case RootKind::RealRoot: return "real";
    case RootKind::ImaginaryRoot: return "imaginary";
    case RootKind::NotRoot: return "not_root";
  }
  return "?";
}

}  // namespace spectra
