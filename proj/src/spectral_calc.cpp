#include "spectra/spectral_calc.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spectra/snf.hpp"

namespace spectra {

namespace {

bool point_is_irr(const SpectralType& st, int i) {
  return i == 0 || st.points[i].num_blocks() > 1;
}

}  // namespace

QuiverModel quiver_model(const SpectralType& st) {
  validate(st);
  QuiverModel m;
  m.st = st;
  const int np = static_cast<int>(st.points.size());
  m.is_irr.resize(np);
  for (int i = 0; i < np; ++i) {
    const auto& p = st.points[i];
    if (p.num_blocks() == 1 && p.pole_order() > 1)
      throw std::invalid_argument("point " + std::to_string(i) +
                                  " has one block and pole order > 1; normalize first");
    m.is_irr[i] = point_is_irr(st, i);
  }

  std::vector<VertexTag> tags;
  m.irr_vertex.assign(np, {});
  m.leg_vertex.assign(np, {});
  for (int i = 0; i < np; ++i) {
    if (!m.is_irr[i]) continue;
    const int mi = st.points[i].num_blocks();
    m.irr_vertex[i].resize(mi);
    for (int j = 1; j <= mi; ++j) {
      m.irr_vertex[i][j - 1] = static_cast<int>(tags.size());
      tags.push_back(VertexTag::irr(i, j));
    }
  }
  for (int i = 0; i < np; ++i) {
    auto blocks = st.points[i].blocks();
    m.leg_vertex[i].resize(blocks.size());
    for (size_t j = 0; j < blocks.size(); ++j) {
      const int e = static_cast<int>(blocks[j]->chain.size());
      m.leg_vertex[i][j].resize(std::max(0, e - 1));
      for (int k = 1; k <= e - 1; ++k) {
        m.leg_vertex[i][j][k - 1] = static_cast<int>(tags.size());
        tags.push_back(VertexTag::leg(i, static_cast<int>(j + 1), k));
      }
    }
  }

  m.q = Quiver(std::move(tags));
  m.alpha.assign(m.q.size(), 0);

  const long long n = st.rank();
  for (int i = 0; i < np; ++i) {
    const auto& p = st.points[i];
    auto blocks = p.blocks();
    const int mi = static_cast<int>(blocks.size());
    if (m.is_irr[i]) {
      // alpha_{[i,j]} = n^{(i)}_j
      for (int j = 0; j < mi; ++j) m.alpha[m.irr_vertex[i][j]] = blocks[j]->total();
      // cross arrows [0,j] -> [i,j'] for i != 0
      if (i != 0) {
        for (int j0 = 0; j0 < st.points[0].num_blocks(); ++j0)
          for (int j = 0; j < mi; ++j)
            m.q.add_arrows(m.irr_vertex[0][j0], m.irr_vertex[i][j], 1);
      }
      // d_i(j,j') arrows within the point
      for (int j = 0; j < mi; ++j)
        for (int j2 = j + 1; j2 < mi; ++j2)
          if (int d = p.d(j, j2); d > 0) m.q.add_arrows(m.irr_vertex[i][j], m.irr_vertex[i][j2], d);
    }
    // legs: alpha_{[i,j,k]} = partial sums; chain arrows; attachment arrows
    for (int j = 0; j < mi; ++j) {
      const auto& chain = blocks[j]->chain;
      const int e = static_cast<int>(chain.size());
      long long acc = m.is_irr[i] ? blocks[j]->total() : n;
      for (int k = 1; k <= e - 1; ++k) {
        acc -= chain[k - 1];
        m.alpha[m.leg_vertex[i][j][k - 1]] = acc;
      }
      for (int k = 2; k <= e - 1; ++k)
        m.q.add_arrows(m.leg_vertex[i][j][k - 1], m.leg_vertex[i][j][k - 2], 1);
      if (e >= 2) {
        if (m.is_irr[i]) {
          m.q.add_arrows(m.leg_vertex[i][j][0], m.irr_vertex[i][j], 1);
        } else {
          for (int j0 = 0; j0 < st.points[0].num_blocks(); ++j0)
            m.q.add_arrows(m.leg_vertex[i][j][0], m.irr_vertex[0][j0], 1);
        }
      }
    }
  }
  return m;
}

long long rigidity_index(const SpectralType& st) {
  auto m = quiver_model(st);
  return 2 * tits_q(m.q, m.alpha);
}

bool is_reduced(const SpectralType& st) {
  for (size_t i = 1; i < st.points.size(); ++i) {
    const auto& p = st.points[i];
    if (p.num_blocks() == 1 && p.blocks()[0]->chain.size() == 1) return false;
  }
  return true;
}

SpectralType normalize(const SpectralType& st) {
  SpectralType out = st;
  for (auto& p : out.points) {
    if (p.num_blocks() == 1 && p.depth() >= 1) {
      const PtNode* n = &p.root;
      while (!n->is_leaf()) n = &n->children.front();
      PtNode leaf = *n;  // copy out before overwriting the tree that owns it
      p.root = std::move(leaf);
    }
  }
  validate(out);
  return out;
}

// --- symbol data -----------------------------------------------------------

namespace {

void synth_qcoef(const PtNode& node, int depth, int pole, std::vector<Rat>& cur,
                 std::vector<std::vector<Rat>>& out) {
  if (node.is_leaf()) {
    out.push_back(cur);
    return;
  }
  for (size_t c = 0; c < node.children.size(); ++c) {
    // node at depth+1 contributes to z^{-(pole - depth)}; index = power-2.
    cur[pole - depth - 2] = Rat(static_cast<long long>(c + 1));
    synth_qcoef(node.children[c], depth + 1, pole, cur, out);
  }
  cur[pole - depth - 2] = 0;
}

}  // namespace

HTLSymbolData make_symbol_data(const SpectralType& st,
                               const std::vector<std::vector<std::vector<Rat>>>& xi) {
  validate(st);
  HTLSymbolData h;
  h.st = st;
  h.xi = xi;
  h.qcoef.resize(st.points.size());
  for (size_t i = 0; i < st.points.size(); ++i) {
    const auto& p = st.points[i];
    const int k = p.pole_order();
    if (k == 1) {
      h.qcoef[i].assign(p.num_blocks(), {});
    } else {
      std::vector<Rat> cur(k - 1, Rat(0));
      h.qcoef[i].clear();
      synth_qcoef(p.root, 0, k, cur, h.qcoef[i]);
    }
  }
  validate_symbol_data(h);
  return h;
}

HTLSymbolData make_symbol_data(const SpectralType& st) {
  std::vector<std::vector<std::vector<Rat>>> xi(st.points.size());
  long long counter = 1;
  for (size_t i = 0; i < st.points.size(); ++i) {
    auto blocks = st.points[i].blocks();
    xi[i].resize(blocks.size());
    for (size_t j = 0; j < blocks.size(); ++j) {
      for (size_t k = 0; k < blocks[j]->chain.size(); ++k)
        xi[i][j].push_back(Rat(counter++, 7));
    }
  }
  return make_symbol_data(st, xi);
}

void validate_symbol_data(const HTLSymbolData& h) {
  validate(h.st);
  const auto& st = h.st;
  if (h.xi.size() != st.points.size() || h.qcoef.size() != st.points.size())
    throw std::invalid_argument("symbol data: point count mismatch");
  for (size_t i = 0; i < st.points.size(); ++i) {
    const auto& p = st.points[i];
    auto blocks = p.blocks();
    const int k = p.pole_order();
    if (h.xi[i].size() != blocks.size() || h.qcoef[i].size() != blocks.size())
      throw std::invalid_argument("symbol data: block count mismatch");
    for (size_t j = 0; j < blocks.size(); ++j) {
      if (h.xi[i][j].size() != blocks[j]->chain.size())
        throw std::invalid_argument("symbol data: chain length mismatch");
      std::set<Rat> seen(h.xi[i][j].begin(), h.xi[i][j].end());
      if (seen.size() != h.xi[i][j].size())
        throw std::invalid_argument("symbol data: repeated eigenvalue within a chain");
      if (static_cast<int>(h.qcoef[i][j].size()) != k - 1)
        throw std::invalid_argument("symbol data: polynomial degree mismatch");
    }
    // Blocks diverge exactly at power d(j,j')+2.
    for (size_t j = 0; j < blocks.size(); ++j)
      for (size_t j2 = j + 1; j2 < blocks.size(); ++j2) {
        const int d = p.d(static_cast<int>(j), static_cast<int>(j2));
        for (int pw = k; pw >= 2; --pw) {
          bool eq = h.qcoef[i][j][pw - 2] == h.qcoef[i][j2][pw - 2];
          if (pw > d + 2 && !eq)
            throw std::invalid_argument("symbol data: polynomial parts diverge too early");
          if (pw == d + 2 && eq)
            throw std::invalid_argument("symbol data: polynomial parts fail to diverge at d+2");
        }
      }
  }
}

ParamVector lambda_of(const HTLSymbolData& h) {
  validate_symbol_data(h);
  auto m = quiver_model(h.st);
  ParamVector l(m.q.size(), Rat(0));
  Rat reg_sum = 0;
  for (int i = 0; i < m.num_points(); ++i)
    if (!m.is_irr[i]) reg_sum += h.xi[i][0][0];
  for (int i = 0; i < m.num_points(); ++i) {
    auto blocks = h.st.points[i].blocks();
    for (size_t j = 0; j < blocks.size(); ++j) {
      if (m.is_irr[i]) {
        Rat v = -h.xi[i][j][0];
        if (i == 0) v -= reg_sum;
        l[m.irr_vertex[i][j]] = v;
      }
      for (size_t k = 0; k + 1 < h.xi[i][j].size(); ++k)
        l[m.leg_vertex[i][j][k]] = h.xi[i][j][k] - h.xi[i][j][k + 1];
    }
  }
  return l;
}

// --- lift lattice -----------------------------------------------------------

std::string LiftGen::id() const {
  if (is_tuple) {
    std::string s = "J(";
    for (size_t i = 0; i < jchoice.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(jchoice[i]);
    }
    return s + ")";
  }
  return "L" + leg.str();
}

LiftLattice lift_lattice(const SpectralType& st, const DimVector& beta) {
  LiftLattice ll;
  ll.model = quiver_model(st);
  const auto& m = ll.model;
  if (static_cast<int>(beta.size()) != m.q.size())
    throw std::invalid_argument("beta size mismatch");
  // beta must be balanced: equal block sums at every irregular point.
  long long s0 = 0;
  for (int j = 0; j < st.points[0].num_blocks(); ++j) s0 += beta[m.irr_vertex[0][j]];
  for (int i = 1; i < m.num_points(); ++i) {
    if (!m.is_irr[i]) continue;
    long long si = 0;
    for (int j = 0; j < st.points[i].num_blocks(); ++j) si += beta[m.irr_vertex[i][j]];
    if (si != s0) throw std::invalid_argument("beta is not balanced (not in L)");
  }
  ll.beta = beta;

  // J_beta: per irregular point the blocks with beta != 0.
  std::vector<std::vector<int>> choices(m.num_points());
  for (int i = 0; i < m.num_points(); ++i) {
    if (!m.is_irr[i]) {
      choices[i] = {1};
      continue;
    }
    for (int j = 1; j <= st.points[i].num_blocks(); ++j)
      if (beta[m.irr_vertex[i][j - 1]] != 0) choices[i].push_back(j);
    if (choices[i].empty()) throw std::invalid_argument("beta vanishes on a whole point");
  }
  std::vector<int> cur(m.num_points(), 1);
  std::vector<size_t> pos(m.num_points(), 0);
  for (;;) {
    for (int i = 0; i < m.num_points(); ++i) cur[i] = choices[i][pos[i]];
    ll.gens.push_back(LiftGen{true, cur, {}});
    int i = m.num_points() - 1;
    while (i >= 0 && ++pos[i] == choices[i].size()) pos[i--] = 0;
    if (i < 0) break;
  }
  for (int v = 0; v < m.q.size(); ++v)
    if (m.q.tag(v).kind == VertexTag::Leg && beta[v] != 0)
      ll.gens.push_back(LiftGen{false, {}, m.q.tag(v)});

  const int ng = static_cast<int>(ll.gens.size());
  ll.gram.assign(ng, std::vector<long long>(ng, 0));
  for (int a = 0; a < ng; ++a)
    for (int b = 0; b < ng; ++b) {
      const auto &ga = ll.gens[a], &gb = ll.gens[b];
      long long v = 0;
      if (a == b) {
        v = 2;
      } else if (ga.is_tuple && gb.is_tuple) {
        v = 2;
        for (int i = 0; i < m.num_points(); ++i)
          if (ga.jchoice[i] != gb.jchoice[i])
            v -= st.points[i].d(ga.jchoice[i] - 1, gb.jchoice[i] - 1) + 2;
      } else if (ga.is_tuple != gb.is_tuple) {
        const auto& t = ga.is_tuple ? ga : gb;
        const auto& leg = ga.is_tuple ? gb.leg : ga.leg;
        v = (t.jchoice[leg.i] == leg.j && leg.k == 1) ? -1 : 0;
      } else {
        const auto &la = ga.leg, &lb = gb.leg;
        v = (la.i == lb.i && la.j == lb.j && std::abs(la.k - lb.k) == 1) ? -1 : 0;
      }
      ll.gram[a][b] = v;
    }

  ll.xi.assign(m.q.size(), std::vector<long long>(ng, 0));
  for (int g = 0; g < ng; ++g) {
    if (ll.gens[g].is_tuple) {
      for (int i = 0; i < m.num_points(); ++i)
        if (m.is_irr[i]) ll.xi[m.irr_vertex[i][ll.gens[g].jchoice[i] - 1]][g] += 1;
    } else {
      const auto& leg = ll.gens[g].leg;
      ll.xi[m.leg_vertex[leg.i][leg.j - 1][leg.k - 1]][g] += 1;
    }
  }
  return ll;
}

DimVector xi_project(const LiftLattice& ll, const DimVector& gamma) {
  if (gamma.size() != ll.gens.size()) throw std::invalid_argument("gamma size mismatch");
  DimVector out(ll.model.q.size(), 0);
  for (size_t v = 0; v < out.size(); ++v)
    for (size_t g = 0; g < gamma.size(); ++g) out[v] += ll.xi[v][g] * gamma[g];
  return out;
}

XiFiber xi_fiber(const LiftLattice& ll, const DimVector& beta) {
  if (static_cast<int>(beta.size()) != ll.model.q.size())
    throw std::invalid_argument("beta size mismatch");
  auto sol = solve_integer(ll.xi, beta);
  if (!sol) throw std::invalid_argument("beta is not in the image of Xi over Z");
  return XiFiber{sol->particular, sol->kernel};
}

nlohmann::json Shape::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (int u = 0; u < size(); ++u)
    nodes.push_back({{"id", ids[u]},
                     {"coeff_base", coeff_base[u]},
                     {"coeff_params", coeff_params[u]}});
  nlohmann::json edges = nlohmann::json::array();
  for (int u = 0; u < size(); ++u)
    for (int v = u + 1; v < size(); ++v)
      if (long long mult = edge_mult(u, v)) edges.push_back({{"u", u}, {"v", v}, {"mult", mult}});
  return nlohmann::json{{"nodes", nodes}, {"edges", edges}, {"n_params", n_params}};
}

Shape Shape::from_json(const nlohmann::json& j) {
  Shape s;
  for (const auto& n : j.at("nodes")) {
    s.ids.push_back(n.at("id"));
    s.coeff_base.push_back(n.at("coeff_base"));
    s.coeff_params.push_back(n.at("coeff_params").get<std::vector<long long>>());
  }
  s.n_params = j.at("n_params");
  const int ng = s.size();
  s.gram.assign(ng, std::vector<long long>(ng, 0));
  for (int u = 0; u < ng; ++u) s.gram[u][u] = 2;
  for (const auto& e : j.at("edges")) {
    int u = e.at("u"), v = e.at("v");
    long long mult = e.at("mult");
    s.gram[u][v] = s.gram[v][u] = -mult;
  }
  for (auto& cp : s.coeff_params) cp.resize(s.n_params, 0);
  return s;
}

Shape shape_of(const SpectralType& st) {
  auto model = quiver_model(st);
  LiftLattice ll = lift_lattice(st, model.alpha);
  XiFiber fib = xi_fiber(ll, model.alpha);
  Shape s;
  s.gram = ll.gram;
  s.n_params = static_cast<int>(fib.kernel.size());
  for (size_t g = 0; g < ll.gens.size(); ++g) {
    s.ids.push_back(ll.gens[g].id());
    s.coeff_base.push_back(fib.base[g]);
    std::vector<long long> params;
    for (const auto& kv : fib.kernel) params.push_back(kv[g]);
    s.coeff_params.push_back(std::move(params));
  }
  return s;
}

}  // namespace spectra
