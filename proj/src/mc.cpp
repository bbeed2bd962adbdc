#include "spectra/mc.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "spectra/errors.hpp"

namespace spectra {

RatMatrix HTLTuple::residue_sum() const {
  RatMatrix s(rank(), rank());
  for (const auto& p : pts) s = s + p[0];
  return s;
}

nlohmann::json HTLTuple::to_json() const {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : pts) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& m : p) {
      nlohmann::json rows = nlohmann::json::array();
      for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m(r, c)));
        rows.push_back(row);
      }
      coeffs.push_back(rows);
    }
    points.push_back({{"pole_order", p.size()}, {"coeffs", coeffs}});
  }
  return nlohmann::json{{"rank", rank()}, {"points", points}};
}

HTLTuple HTLTuple::from_json(const nlohmann::json& j) {
  HTLTuple t;
  const int n = j.at("rank");
  for (const auto& p : j.at("points")) {
    std::vector<RatMatrix> coeffs;
    for (const auto& mj : p.at("coeffs")) {
      RatMatrix m(n, n);
      int r = 0;
      for (const auto& row : mj) {
        int c = 0;
        for (const auto& cell : row) m(r, c++) = rat_from_string(cell.get<std::string>());
        ++r;
      }
      coeffs.push_back(std::move(m));
    }
    if (static_cast<size_t>(p.at("pole_order").get<int>()) != coeffs.size())
      throw std::invalid_argument("pole_order does not match coefficient count");
    if (coeffs.empty()) throw std::invalid_argument("point with no coefficients");
    t.pts.push_back(std::move(coeffs));
  }
  return t;
}

nlohmann::json symbol_data_to_json(const HTLSymbolData& h) {
  auto rats = [](const std::vector<Rat>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(rat_to_string(x));
    return a;
  };
  nlohmann::json xi = nlohmann::json::array(), qc = nlohmann::json::array();
  for (size_t i = 0; i < h.xi.size(); ++i) {
    nlohmann::json xs = nlohmann::json::array(), qs = nlohmann::json::array();
    for (size_t j = 0; j < h.xi[i].size(); ++j) {
      xs.push_back(rats(h.xi[i][j]));
      qs.push_back(rats(h.qcoef[i][j]));
    }
    xi.push_back(xs);
    qc.push_back(qs);
  }
  // Points kept in the stored (non-canonical) order so xi/qcoef stay aligned.
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : h.st.points) pts.push_back(print_point_raw(p));
  return nlohmann::json{{"spectral_type", print_spectral_type(h.st)},
                        {"points_as_written", pts},
                        {"xi", xi},
                        {"qcoef", qc}};
}

HTLSymbolData symbol_data_from_json(const nlohmann::json& j) {
  HTLSymbolData h;
  std::string txt;
  for (const auto& p : j.at("points_as_written")) {
    if (!txt.empty()) txt += ',';
    txt += p.get<std::string>();
  }
  h.st = parse_spectral_type(txt);
  auto rats = [](const nlohmann::json& a) {
    std::vector<Rat> v;
    for (const auto& x : a) v.push_back(rat_from_string(x.get<std::string>()));
    return v;
  };
  for (const auto& xs : j.at("xi")) {
    h.xi.emplace_back();
    for (const auto& x : xs) h.xi.back().push_back(rats(x));
  }
  for (const auto& qs : j.at("qcoef")) {
    h.qcoef.emplace_back();
    for (const auto& q : qs) h.qcoef.back().push_back(rats(q));
  }
  validate_symbol_data(h);
  return h;
}

std::vector<RatMatrix> normal_form_matrices(const HTLSymbolData& h, int i) {
  const auto& p = h.st.points[i];
  auto blocks = p.blocks();
  const int k = p.pole_order();
  const int n = static_cast<int>(p.rank());
  std::vector<RatMatrix> out(k, RatMatrix(n, n));
  int off = 0;
  for (size_t j = 0; j < blocks.size(); ++j) {
    const int nj = static_cast<int>(blocks[j]->total());
    for (int nu = 2; nu <= k; ++nu) {
      const Rat& c = h.qcoef[i][j][nu - 2];
      for (int r = 0; r < nj; ++r) out[nu - 1](off + r, off + r) = c;
    }
    int r = 0;
    for (size_t e = 0; e < blocks[j]->chain.size(); ++e)
      for (long long m = 0; m < blocks[j]->chain[e]; ++m) out[0](off + r, off + r) = h.xi[i][j][e], ++r;
    off += nj;
  }
  return out;
}

namespace {

// Rank chain of M against the expected eigenvalue chain: returns true iff
// rank prod_{l<=k}(M - xi_l) = sum_{l>k} m_l for every k, ending at 0.
bool check_residue_chain(const RatMatrix& M, const std::vector<Rat>& xi,
                         const std::vector<long long>& mult) {
  RatMatrix prod = RatMatrix::identity(M.rows());
  long long expect = 0;
  for (long long m : mult) expect += m;
  if (expect != M.rows()) return false;
  for (size_t k = 0; k < xi.size(); ++k) {
    RatMatrix factor = M - xi[k] * RatMatrix::identity(M.rows());
    prod = prod * factor;
    expect -= mult[k];
    if (rank(prod) != expect) return false;
  }
  return expect == 0;
}

std::vector<int> block_offsets(const PointType& p) {
  std::vector<int> off{0};
  for (auto* b : p.blocks()) off.push_back(off.back() + static_cast<int>(b->total()));
  return off;
}

}  // namespace

HTLTuple build_htl_tuple(const HTLSymbolData& h, const std::vector<RatMatrix>& conjugators) {
  validate_symbol_data(h);
  const int np = h.num_points();
  const int n = static_cast<int>(h.rank());
  if (!conjugators.empty() && static_cast<int>(conjugators.size()) != np)
    throw std::invalid_argument("conjugator count mismatch");

  auto conj = [&](int i) -> std::optional<std::pair<RatMatrix, RatMatrix>> {
    if (conjugators.empty() || conjugators[i].rows() == 0) return std::nullopt;
    auto inv = inverse(conjugators[i]);
    if (!inv) throw std::invalid_argument("conjugator is singular");
    return std::make_pair(conjugators[i], *inv);
  };

  HTLTuple A;
  A.pts.resize(np);
  RatMatrix res_sum(n, n);
  for (int i = 1; i < np; ++i) {
    auto nf = normal_form_matrices(h, i);
    if (auto g = conj(i))
      for (auto& m : nf) m = g->first * m * g->second;
    res_sum = res_sum + nf[0];
    A.pts[i] = std::move(nf);
  }

  auto nf0 = normal_form_matrices(h, 0);
  auto g0 = conj(0);
  for (size_t v = 1; v < nf0.size(); ++v)
    if (g0) nf0[v] = g0->first * nf0[v] * g0->second;
  RatMatrix forced = -res_sum;
  // Check the forced residue against point 0's prescribed chains, in the
  // frame where the polynomial part is block-diagonal.
  RatMatrix M = g0 ? g0->second * forced * g0->first : forced;
  const auto& p0 = h.st.points[0];
  auto blocks = p0.blocks();
  auto off = block_offsets(p0);
  const int k0 = p0.pole_order();
  if (k0 >= 3) {
    // At pole order >= 3 only block-diagonal residues are certified here.
    for (size_t j = 0; j < blocks.size(); ++j)
      for (size_t j2 = 0; j2 < blocks.size(); ++j2) {
        if (j == j2) continue;
        if (!M.block(off[j], off[j2], off[j + 1] - off[j], off[j2 + 1] - off[j2]).is_zero())
          throw std::invalid_argument(
              "residue-sum infeasible: forced point-0 residue is not block-diagonal "
              "(pole order >= 3)");
      }
  }
  for (size_t j = 0; j < blocks.size(); ++j) {
    RatMatrix Mjj = M.block(off[j], off[j], off[j + 1] - off[j], off[j + 1] - off[j]);
    if (!check_residue_chain(Mjj, h.xi[0][j], blocks[j]->chain))
      throw std::invalid_argument("residue-sum infeasible: point-0 block " + std::to_string(j + 1) +
                                  " does not carry the prescribed eigenvalue chain");
  }
  nf0[0] = forced;
  A.pts[0] = std::move(nf0);
  return A;
}

HTLTuple addition(int t, const std::vector<Rat>& poly, const HTLTuple& A) {
  if (t < 0 || t >= A.num_points()) throw std::invalid_argument("addition: bad point index");
  if (static_cast<int>(poly.size()) > A.pole_order(t))
    throw std::invalid_argument("addition: polynomial degree exceeds pole order");
  HTLTuple out = A;
  for (size_t v = 0; v < poly.size(); ++v)
    out.pts[t][v] = out.pts[t][v] - poly[v] * RatMatrix::identity(A.rank());
  return out;
}

int CanonicalDatum::dim_w() const {
  int s = 0;
  for (int w : wdim) s += w;
  return s;
}

RatMatrix CanonicalDatum::q_total() const {
  RatMatrix q(n, dim_w());
  int off = 0;
  for (size_t i = 0; i < Q.size(); ++i) {
    q.set_block(0, off, Q[i]);
    off += wdim[i];
  }
  return q;
}

RatMatrix CanonicalDatum::p_total() const {
  RatMatrix p(dim_w(), n);
  int off = 0;
  for (size_t i = 0; i < P.size(); ++i) {
    p.set_block(off, 0, P[i]);
    off += wdim[i];
  }
  return p;
}

CanonicalDatum canonical_datum(const HTLTuple& A) {
  CanonicalDatum cd;
  const int n = A.rank();
  cd.n = n;
  for (int i = 0; i < A.num_points(); ++i) {
    const int k = A.pole_order(i);
    const int kn = k * n;
    RatMatrix ahat(kn, kn), nhat(kn, kn), qhat(n, kn), phat(kn, n);
    for (int r = 0; r < k; ++r)
      for (int c = r; c < k; ++c) ahat.set_block(r * n, c * n, A.pts[i][k - 1 - (c - r)]);
    for (int r = 0; r + 1 < k; ++r) nhat.set_block(r * n, (r + 1) * n, RatMatrix::identity(n));
    for (int c = 0; c < k; ++c) qhat.set_block(0, c * n, A.pts[i][k - 1 - c]);
    phat.set_block((k - 1) * n, 0, RatMatrix::identity(n));

    RatMatrix K = kernel_basis(ahat);
    auto piv = pivot_rows(K);
    std::vector<char> is_piv(kn, 0);
    for (int r : piv) is_piv[r] = 1;
    std::vector<int> comp;
    for (int r = 0; r < kn; ++r)
      if (!is_piv[r]) comp.push_back(r);
    const int w = static_cast<int>(comp.size());

    RatMatrix lift(kn, w);
    for (int c = 0; c < w; ++c) lift(comp[c], c) = 1;
    // pi = bottom rows of [K | lift]^{-1}: quotient coordinates.
    RatMatrix basis(kn, kn);
    basis.set_block(0, 0, K);
    basis.set_block(0, K.cols(), lift);
    auto inv = inverse(basis);
    if (!inv) throw std::logic_error("canonical_datum: complement choice failed");
    RatMatrix pi = inv->block(K.cols(), 0, w, kn);

    cd.wdim.push_back(w);
    cd.T.push_back(pi * (nhat * lift));
    cd.Q.push_back(qhat * lift);
    cd.P.push_back(pi * phat);
    cd.proj.push_back(std::move(pi));
    cd.lift.push_back(std::move(lift));
  }
  return cd;
}

std::optional<HTLSymbolData> predict_mc_data(const HTLSymbolData& h, const JTuple& t,
                                             long long dim_w, std::string* why) {
  auto fail = [&](const std::string& msg) -> std::optional<HTLSymbolData> {
    if (why) *why = msg;
    return std::nullopt;
  };
  const long long n = h.rank();
  const long long delta = dim_w - 2 * n;
  Rat xi_i = 0;
  for (int i = 0; i < h.num_points(); ++i) xi_i += h.xi[i][t.j[i] - 1][0];

  HTLSymbolData out = h;
  for (int i = 0; i < h.num_points(); ++i) {
    const auto& p = h.st.points[i];
    const int ji = t.j[i] - 1;
    const int mblocks = p.num_blocks();
    for (int j = 0; j < mblocks; ++j) {
      auto& vals = out.xi[i][j];
      if (j != ji) {
        Rat shift = (i == 0) ? Rat(p.d(j, ji)) * xi_i : Rat(p.d(j, ji) + 2) * xi_i;
        for (auto& v : vals) v += shift;
      }
    }
    // Convolved block: first multiplicity moves by delta, tail values shift.
    auto& vals = out.xi[i][ji];
    std::vector<long long> mult = p.blocks()[ji]->chain;
    if (mult[0] + delta < 0) return fail("negative multiplicity in convolved block");
    mult[0] += delta;
    for (size_t kk = 1; kk < vals.size(); ++kk) vals[kk] += (i == 0) ? -xi_i : xi_i;
    if (i == 0) vals[0] -= 2 * xi_i;
    if (mult[0] == 0) {
      if (mult.size() == 1) return fail("convolved block vanishes");
      mult.erase(mult.begin());
      vals.erase(vals.begin());
    }
    for (size_t a2 = 0; a2 < vals.size(); ++a2)
      for (size_t b2 = a2 + 1; b2 < vals.size(); ++b2)
        if (vals[a2] == vals[b2]) return fail("eigenvalue collision in shifted chain");
    // Write the new multiplicities into the tree leaf.
    std::vector<PtNode*> leaves;
    struct Walk {
      static void run(PtNode& nd, std::vector<PtNode*>& out) {
        if (nd.is_leaf()) {
          out.push_back(&nd);
          return;
        }
        for (auto& c : nd.children) run(c, out);
      }
    };
    Walk::run(out.st.points[i].root, leaves);
    leaves[ji]->chain = mult;
  }
  try {
    validate_symbol_data(out);
  } catch (const std::exception& e) {
    return fail(std::string("predicted data invalid: ") + e.what());
  }
  return out;
}

McResult middle_convolution(const HTLTuple& A, const JTuple& t, const HTLSymbolData& h,
                            const McOptions& opt) {
  if (A.num_points() != h.num_points()) throw std::invalid_argument("tuple/data point mismatch");
  if (static_cast<int>(t.j.size()) != A.num_points()) throw std::invalid_argument("tuple arity mismatch");
  if (!A.residue_sum_zero()) throw std::invalid_argument("input tuple violates the residue-sum constraint");
  const int n = A.rank();

  Rat xi_i = 0;
  for (int i = 0; i < h.num_points(); ++i) {
    const int mi = h.st.points[i].num_blocks();
    if (t.j[i] < 1 || t.j[i] > mi) throw std::invalid_argument("block choice out of range");
    xi_i += h.xi[i][t.j[i] - 1][0];
  }
  if (xi_i == 0) throw MathError("xi_i = 0: middle convolution undefined");

  // Add_i: subtract q^{(i)}_{j_i} + xi^{[i,j_i]}_1 z^{-1} at every point.
  HTLTuple cur = A;
  for (int i = 0; i < A.num_points(); ++i) {
    std::vector<Rat> poly(A.pole_order(i), Rat(0));
    poly[0] = h.xi[i][t.j[i] - 1][0];
    for (size_t v = 0; v + 1 < poly.size(); ++v) poly[v + 1] = h.qcoef[i][t.j[i] - 1][v];
    cur = addition(i, poly, cur);
  }

  CanonicalDatum cd = canonical_datum(cur);
  const int dimw = cd.dim_w();
  if (dimw <= n) throw MathError("middle convolution collapses to rank <= 0");
  RatMatrix P = cd.p_total();

  // Coordinate section of Coker P on the non-pivot rows.
  std::vector<int> piv;
  if (opt.section_variant == 0) {
    piv = pivot_rows(P);
  } else {
    // Reversed row order gives a different complement.
    RatMatrix rev(P.rows(), P.cols());
    for (int r = 0; r < P.rows(); ++r)
      for (int c = 0; c < P.cols(); ++c) rev(r, c) = P(P.rows() - 1 - r, c);
    for (int r : pivot_rows(rev)) piv.push_back(P.rows() - 1 - r);
    std::sort(piv.begin(), piv.end());
  }
  if (static_cast<int>(piv.size()) != n) throw std::logic_error("P is not injective");
  std::vector<char> is_piv(dimw, 0);
  for (int r : piv) is_piv[r] = 1;
  std::vector<int> comp;
  for (int r = 0; r < dimw; ++r)
    if (!is_piv[r]) comp.push_back(r);
  const int n2 = dimw - n;

  RatMatrix embed(dimw, n2);
  for (int c = 0; c < n2; ++c) embed(comp[c], c) = 1;
  RatMatrix basis(dimw, dimw);
  basis.set_block(0, 0, P);
  basis.set_block(0, n, embed);
  auto inv = inverse(basis);
  if (!inv) throw std::logic_error("cokernel section failed");
  RatMatrix qprime = inv->block(n, 0, n2, dimw);  // Q': W -> V'
  RatMatrix pprime = xi_i * embed;                // P' with Q'(xi^{-1} P') = Id

  // Per-point components and coefficients (A')^{(i)}_v = Q'_i N_i^{v-1} P'_i.
  HTLTuple out;
  out.pts.resize(A.num_points());
  int off = 0;
  for (int i = 0; i < A.num_points(); ++i) {
    const int w = cd.wdim[i];
    RatMatrix qi = qprime.block(0, off, n2, w);
    RatMatrix pi2 = pprime.block(off, 0, w, n2);  // P': V' -> W_i component
    RatMatrix npow = RatMatrix::identity(w);
    for (int v = 0; v < A.pole_order(i); ++v) {
      out.pts[i].push_back(qi * (npow * pi2));
      npow = cd.T[i] * npow;
    }
    off += w;
  }

  // Add_i^{-1} then Add^{(0)}_{2 xi_i z^{-1}}.
  for (int i = 0; i < A.num_points(); ++i) {
    std::vector<Rat> poly(A.pole_order(i), Rat(0));
    poly[0] = -h.xi[i][t.j[i] - 1][0];
    for (size_t v = 0; v + 1 < poly.size(); ++v) poly[v + 1] = -h.qcoef[i][t.j[i] - 1][v];
    out = addition(i, poly, out);
  }
  out = addition(0, {2 * xi_i}, out);

  McResult res;
  res.out = std::move(out);
  res.dim_w = dimw;
  res.out_rank = n2;
  res.xi_i = xi_i;
  std::string why;
  res.out_data = predict_mc_data(h, t, dimw, &why);
  res.data_note = why;
  return res;
}

bool is_irreducible(const HTLTuple& A) {
  const int n = A.rank();
  if (n == 1) return true;
  const int nn = n * n;
  // Incremental span of words in the coefficients, via reduced row storage.
  std::vector<std::vector<Rat>> basis;        // reduced rows
  std::vector<int> lead;                      // leading index of each row
  auto insert = [&](std::vector<Rat> v) -> bool {
    for (size_t b = 0; b < basis.size(); ++b) {
      if (v[lead[b]] == 0) continue;
      Rat f = v[lead[b]];
      for (int i2 = 0; i2 < nn; ++i2) v[i2] -= f * basis[b][i2];
    }
    int ld = -1;
    for (int i2 = 0; i2 < nn; ++i2)
      if (v[i2] != 0) {
        ld = i2;
        break;
      }
    if (ld < 0) return false;
    Rat inv = Rat(1) / v[ld];
    for (int i2 = 0; i2 < nn; ++i2) v[i2] *= inv;
    basis.push_back(std::move(v));
    lead.push_back(ld);
    return true;
  };
  auto flat = [&](const RatMatrix& m) {
    std::vector<Rat> v(nn);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v[r * n + c] = m(r, c);
    return v;
  };
  std::vector<RatMatrix> gens;
  for (const auto& p : A.pts)
    for (const auto& m : p) gens.push_back(m);
  std::vector<RatMatrix> queue{RatMatrix::identity(n)};
  insert(flat(queue[0]));
  size_t qi = 0;
  while (qi < queue.size() && static_cast<int>(basis.size()) < nn) {
    RatMatrix w = queue[qi++];
    for (const auto& g : gens) {
      RatMatrix gw = g * w;
      if (insert(flat(gw))) queue.push_back(std::move(gw));
    }
  }
  return static_cast<int>(basis.size()) == nn;
}

std::optional<RatMatrix> equivalent(const HTLTuple& A, const HTLTuple& B) {
  if (A.num_points() != B.num_points() || A.rank() != B.rank())
    throw std::invalid_argument("equivalent: rank or point count mismatch");
  for (int i = 0; i < A.num_points(); ++i)
    if (A.pole_order(i) != B.pole_order(i))
      throw std::invalid_argument("equivalent: pole order mismatch");
  const int n = A.rank();
  const int nn = n * n;
  // g A^{(i)}_v = B^{(i)}_v g, linear in g (row-major unknowns).
  std::vector<std::vector<Rat>> rows;
  for (int i = 0; i < A.num_points(); ++i)
    for (int v = 0; v < A.pole_order(i); ++v) {
      const RatMatrix &Am = A.pts[i][v], &Bm = B.pts[i][v];
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          std::vector<Rat> row(nn, Rat(0));
          // (g Am)(r,c) = sum_k g(r,k) Am(k,c); (Bm g)(r,c) = sum_k Bm(r,k) g(k,c)
          for (int k = 0; k < n; ++k) {
            row[r * n + k] += Am(k, c);
            row[k * n + c] -= Bm(r, k);
          }
          rows.push_back(std::move(row));
        }
    }
  RatMatrix sys(static_cast<int>(rows.size()), nn);
  for (size_t r = 0; r < rows.size(); ++r)
    for (int c = 0; c < nn; ++c) sys(static_cast<int>(r), c) = rows[r][c];
  RatMatrix ker = kernel_basis(sys);
  for (int c = 0; c < ker.cols(); ++c) {
    RatMatrix g(n, n);
    for (int r = 0; r < n; ++r)
      for (int c2 = 0; c2 < n; ++c2) g(r, c2) = ker(r * n + c2, c);
    if (determinant(g) != 0) return g;
  }
  // A couple of deterministic combinations for the (non-irreducible) case of
  // a solution space of dimension > 1 with singular basis elements.
  if (ker.cols() >= 2) {
    for (int s = 1; s <= 4; ++s) {
      RatMatrix g(n, n);
      for (int c = 0; c < ker.cols(); ++c) {
        Rat coef = Rat((s * (c + 2) + 1) % 7 + 1);
        for (int r = 0; r < n; ++r)
          for (int c2 = 0; c2 < n; ++c2) g(r, c2) += coef * ker(r * n + c2, c);
      }
      if (determinant(g) != 0) return g;
    }
  }
  return std::nullopt;
}

ResidueChains residue_spectral_data(const HTLTuple& A, const HTLSymbolData& h) {
  if (A.num_points() != h.num_points()) throw std::invalid_argument("tuple/data point mismatch");
  const int n = A.rank();
  ResidueChains out(A.num_points());
  for (int i = 0; i < A.num_points(); ++i) {
    const auto& p = h.st.points[i];
    auto blocks = p.blocks();
    const int k = A.pole_order(i);
    // Simultaneous eigenspaces of (A_k, ..., A_2) per expected block scalars.
    std::vector<RatMatrix> bases;
    int total = 0;
    for (size_t j = 0; j < blocks.size(); ++j) {
      RatMatrix stacked((k - 1) * n, n);
      for (int nu = 2; nu <= k; ++nu) {
        RatMatrix d = A.pts[i][nu - 1] - h.qcoef[i][j][nu - 2] * RatMatrix::identity(n);
        stacked.set_block((nu - 2) * n, 0, d);
      }
      RatMatrix base = (k == 1) ? RatMatrix::identity(n) : kernel_basis(stacked);
      if (base.cols() != blocks[j]->total())
        throw MathError("block separation failed: leading coefficients are not semisimple "
                        "with the expected spectrum");
      total += base.cols();
      bases.push_back(std::move(base));
    }
    if (total != n) throw MathError("block separation failed: blocks do not fill the space");
    RatMatrix frame(n, n);
    int off = 0;
    for (const auto& b : bases) {
      frame.set_block(0, off, b);
      off += b.cols();
    }
    auto frame_inv = inverse(frame);
    if (!frame_inv) throw MathError("block separation failed: block spaces are not independent");
    RatMatrix res = *frame_inv * (A.pts[i][0] * frame);
    off = 0;
    for (size_t j = 0; j < blocks.size(); ++j) {
      const int nj = static_cast<int>(blocks[j]->total());
      RatMatrix Mjj = res.block(off, off, nj, nj);
      // Extract the chain against the expected eigenvalues.
      std::vector<std::pair<Rat, long long>> chain;
      RatMatrix prod = RatMatrix::identity(nj);
      long long prev = nj;
      for (size_t e = 0; e < h.xi[i][j].size(); ++e) {
        prod = prod * (Mjj - h.xi[i][j][e] * RatMatrix::identity(nj));
        long long rk = rank(prod);
        chain.emplace_back(h.xi[i][j][e], prev - rk);
        prev = rk;
      }
      if (prev != 0)
        throw MathError("residue chain of point " + std::to_string(i) + " block " +
                        std::to_string(j + 1) + " does not terminate at rank 0");
      out[i].push_back(std::move(chain));
      off += nj;
    }
  }
  return out;
}

bool verify_htl_membership(const HTLTuple& A, const HTLSymbolData& h, unsigned seed) {
  if (A.num_points() != h.num_points()) return false;
  if (A.rank() != static_cast<int>(h.rank())) return false;
  const int n = A.rank();
  std::mt19937_64 rng(seed);
  for (int i = 0; i < A.num_points(); ++i) {
    const int k = A.pole_order(i);
    if (k != h.st.points[i].pole_order()) return false;
    auto N = normal_form_matrices(h, i);
    // Solve sum_s (X_s N_{v+s} - A_{v+s} X_s) = 0 for v = 1..k over the
    // truncated gauge X = X_0 + ... + X_{k-1} z^{k-1}; membership iff a
    // solution with invertible X_0 exists.
    const int unknowns = k * n * n;
    std::vector<std::vector<Rat>> rows;
    for (int v = 1; v <= k; ++v) {
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          std::vector<Rat> row(unknowns, Rat(0));
          for (int s = 0; v + s <= k; ++s) {
            const RatMatrix& Nm = N[v + s - 1];
            const RatMatrix& Am = A.pts[i][v + s - 1];
            // + (X_s N)(r,c), - (A X_s)(r,c)
            for (int t2 = 0; t2 < n; ++t2) {
              row[s * n * n + r * n + t2] += Nm(t2, c);
              row[s * n * n + t2 * n + c] -= Am(r, t2);
            }
          }
          rows.push_back(std::move(row));
        }
    }
    RatMatrix sys(static_cast<int>(rows.size()), unknowns);
    for (size_t r = 0; r < rows.size(); ++r)
      for (int c = 0; c < unknowns; ++c) sys(static_cast<int>(r), c) = rows[r][c];
    RatMatrix ker = kernel_basis(sys);
    bool ok = false;
    for (int c = 0; c < ker.cols() && !ok; ++c) {
      RatMatrix x0(n, n);
      for (int r = 0; r < n; ++r)
        for (int c2 = 0; c2 < n; ++c2) x0(r, c2) = ker(r * n + c2, c);
      ok = determinant(x0) != 0;
    }
    for (int tries = 0; tries < 24 && !ok && ker.cols() > 0; ++tries) {
      RatMatrix x0(n, n);
      for (int c = 0; c < ker.cols(); ++c) {
        Rat coef = Rat(static_cast<long long>(rng() % 19) - 9);
        for (int r = 0; r < n; ++r)
          for (int c2 = 0; c2 < n; ++c2) x0(r, c2) += coef * ker(r * n + c2, c);
      }
      ok = determinant(x0) != 0;
    }
    if (!ok) return false;
  }
  return true;
}

std::vector<RatMatrix> moment_map(const Quiver& q, const QuiverRep& rep) {
  if (static_cast<int>(rep.dims.size()) != q.size()) throw std::invalid_argument("rep dims mismatch");
  std::vector<RatMatrix> mu;
  for (int a = 0; a < q.size(); ++a)
    mu.emplace_back(static_cast<int>(rep.dims[a]), static_cast<int>(rep.dims[a]));
  for (const auto& ar : rep.arrows) {
    if (ar.src < 0 || ar.src >= q.size() || ar.dst < 0 || ar.dst >= q.size())
      throw std::invalid_argument("arrow endpoint out of range");
    if (ar.x.rows() != rep.dims[ar.dst] || ar.x.cols() != rep.dims[ar.src] ||
        ar.xstar.rows() != rep.dims[ar.src] || ar.xstar.cols() != rep.dims[ar.dst])
      throw std::invalid_argument("arrow matrix shape mismatch");
    mu[ar.dst] = mu[ar.dst] + ar.x * ar.xstar;
    mu[ar.src] = mu[ar.src] - ar.xstar * ar.x;
  }
  return mu;
}

}  // namespace spectra
