#include "spectra/sample_gen.hpp"

#include <algorithm>

#include "spectra/errors.hpp"

namespace spectra {

namespace {

Rat rnd_rat(std::mt19937_64& rng) {
  long long num = static_cast<long long>(rng() % 41) - 20;
  long long den = 1 + static_cast<long long>(rng() % 3);
  return Rat(num, den);
}

Rat rnd_nonzero(std::mt19937_64& rng) {
  for (;;) {
    Rat r = rnd_rat(rng);
    if (r != 0) return r;
  }
}

std::vector<Rat> distinct_rats(std::mt19937_64& rng, int k) {
  std::vector<Rat> out;
  while (static_cast<int>(out.size()) < k) {
    Rat r = rnd_rat(rng);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

HTLSymbolData data_for(const std::string& type, std::vector<std::vector<std::vector<Rat>>> xi) {
  HTLSymbolData h;
  h.st = parse_spectral_type(type);
  return make_symbol_data(h.st, xi);
}

// Rank-2 Fuchsian "11,11,11": triangular residues with prescribed spectra.
std::optional<Sample> seed_fuchsian(std::mt19937_64& rng) {
  Rat s1 = rnd_nonzero(rng), s2 = rnd_nonzero(rng);
  Rat a = rnd_rat(rng);
  Rat b = -(s1 + s2) - a;
  if (a == b || s1 == 0 || s2 == 0) return std::nullopt;
  Rat x = 1, y = s1 * s2 - a * b;
  if (y == 0) return std::nullopt;

  Sample s;
  s.data = data_for("11,11,11", {{{a, b}}, {{Rat(0), s1}}, {{s2, Rat(0)}}});
  const int n = 2;
  auto mat = [&](Rat m11, Rat m12, Rat m21, Rat m22) {
    RatMatrix m(n, n);
    m(0, 0) = m11;
    m(0, 1) = m12;
    m(1, 0) = m21;
    m(1, 1) = m22;
    return m;
  };
  s.tuple.pts = {{mat(-s2, -x, -y, -s1)}, {mat(0, x, 0, s1)}, {mat(s2, 0, y, 0)}};
  return s;
}

// Rank-2 "(1)(1),11": diagonal pole-2 point, free residue off-diagonals.
std::optional<Sample> seed_pole2(std::mt19937_64& rng) {
  auto c = distinct_rats(rng, 2);
  Rat xa = rnd_rat(rng), xb = rnd_rat(rng);
  if (xa == xb) return std::nullopt;  // distinct for cleaner data (not required)
  Rat r1 = rnd_rat(rng);
  Rat r2 = -(xa + xb) - r1;
  if (r1 == r2) return std::nullopt;
  Rat x = 1, y = xa * xb - r1 * r2;
  if (y == 0) return std::nullopt;

  Sample s;
  s.data = data_for("(1)(1),11", {{{xa}, {xb}}, {{r1, r2}}});
  auto mat = [&](Rat m11, Rat m12, Rat m21, Rat m22) {
    RatMatrix m(2, 2);
    m(0, 0) = m11;
    m(0, 1) = m12;
    m(1, 0) = m21;
    m(1, 1) = m22;
    return m;
  };
  s.tuple.pts = {{mat(c[0], 0, 0, c[1]), mat(xa, x, y, xb)}, {mat(-xa, -x, -y, -xb)}};
  // Reorder: coefficients are stored lowest power first (z^{-1} first).
  std::swap(s.tuple.pts[0][0], s.tuple.pts[0][1]);
  return s;
}

// Rank-2 "(1)(1),11,11": pole-2 point plus two regular points.
std::optional<Sample> seed_pole2_3pts(std::mt19937_64& rng) {
  auto c = distinct_rats(rng, 2);
  Rat xa = rnd_rat(rng), xb = rnd_rat(rng);
  Rat r1 = rnd_rat(rng), r2 = rnd_rat(rng);
  if (r1 == r2) return std::nullopt;
  Rat u1 = rnd_rat(rng);
  Rat u2 = -(xa + xb + r1 + r2) - u1;
  if (u1 == u2) return std::nullopt;
  // A^{(1)}_1 = g diag(r1,r2) g^{-1} with unipotent g.
  Rat t = rnd_nonzero(rng), u = rnd_nonzero(rng);
  RatMatrix g(2, 2), D(2, 2);
  g(0, 0) = 1;
  g(0, 1) = t;
  g(1, 0) = u;
  g(1, 1) = 1 + t * u;
  D(0, 0) = r1;
  D(1, 1) = r2;
  RatMatrix B = g * D * *inverse(g);
  // A^{(0)}_1 = [[xa, x],[y, xb]]; A^{(2)}_1 = -A0 - B needs spectrum {u1,u2}.
  Rat y = rnd_nonzero(rng);
  if (y + B(1, 0) == 0) return std::nullopt;
  // det(-A0 - B) = (xa+B00)(xb+B11) - (x+B01)(y+B10) = u1 u2.
  Rat x = ((xa + B(0, 0)) * (xb + B(1, 1)) - u1 * u2) / (y + B(1, 0)) - B(0, 1);

  Sample s;
  s.data = data_for("(1)(1),11,11", {{{xa}, {xb}}, {{r1, r2}}, {{u1, u2}}});
  RatMatrix A0res(2, 2), A0lead(2, 2);
  A0res(0, 0) = xa;
  A0res(0, 1) = x;
  A0res(1, 0) = y;
  A0res(1, 1) = xb;
  A0lead(0, 0) = c[0];
  A0lead(1, 1) = c[1];
  RatMatrix C = -A0res - B;
  s.tuple.pts = {{A0res, A0lead}, {B}, {C}};
  return s;
}

// Rank-2 "((1))((1)),11": pole-3 point via an exact truncated gauge.
std::optional<Sample> seed_pole3(std::mt19937_64& rng) {
  auto c3 = distinct_rats(rng, 2);
  auto c2 = distinct_rats(rng, 2);
  Rat xa = rnd_rat(rng), xb = rnd_rat(rng);
  Rat r1 = rnd_rat(rng);
  Rat r2 = -(xa + xb) - r1;
  if (r1 == r2) return std::nullopt;
  Rat d3 = c3[0] - c3[1], d2 = c2[0] - c2[1];
  Rat a1 = rnd_nonzero(rng), b1 = rnd_nonzero(rng);
  Rat P = a1 * b1 * d3;
  // Residue of the gauged point: diag(xa+P, xb-P) + [[0,X],[Y,0]].
  Rat X = 1;
  Rat Y = (xa + P) * (xb - P) - r1 * r2;  // forces spectrum {r1, r2}
  if (Y == 0) return std::nullopt;
  Rat a2 = (-X - a1 * d2) / d3;
  Rat b2 = (Y - b1 * d2) / d3;
  (void)a2;
  (void)b2;

  Sample s;
  s.data = data_for("((1))((1)),11", {{{xa}, {xb}}, {{r1, r2}}});
  RatMatrix A3(2, 2), A2(2, 2), A1(2, 2);
  A3(0, 0) = c3[0];
  A3(1, 1) = c3[1];
  // A2 = diag(c2) + [g1, Lambda3]
  A2(0, 0) = c2[0];
  A2(1, 1) = c2[1];
  A2(0, 1) = -a1 * d3;
  A2(1, 0) = b1 * d3;
  A1(0, 0) = xa + P;
  A1(1, 1) = xb - P;
  A1(0, 1) = X;
  A1(1, 0) = Y;
  s.tuple.pts = {{A1, A2, A3}, {-A1}};
  return s;
}

// Rank-2 "(1)(1),(1)(1)": two pole-2 points, the second in a random frame.
std::optional<Sample> seed_two_pole2(std::mt19937_64& rng) {
  auto c0 = distinct_rats(rng, 2);
  auto c1 = distinct_rats(rng, 2);
  Rat xa = rnd_rat(rng), xb = rnd_rat(rng);
  Rat x = rnd_nonzero(rng), y = rnd_nonzero(rng);
  RatMatrix g(2, 2);
  g(0, 0) = 1;
  g(0, 1) = rnd_rat(rng);
  g(1, 0) = rnd_rat(rng);
  g(1, 1) = 1 + g(0, 1) * g(1, 0) + 1;  // det = 1 + g01*g10 + ... keep nonzero
  if (determinant(g) == 0) return std::nullopt;
  RatMatrix A0res(2, 2), A0lead(2, 2), lead1(2, 2);
  A0res(0, 0) = xa;
  A0res(0, 1) = x;
  A0res(1, 0) = y;
  A0res(1, 1) = xb;
  A0lead(0, 0) = c0[0];
  A0lead(1, 1) = c0[1];
  lead1(0, 0) = c1[0];
  lead1(1, 1) = c1[1];
  RatMatrix ginv = *inverse(g);
  RatMatrix A1res = -A0res;
  RatMatrix M = ginv * A1res * g;  // block data of point 1 in its own frame
  if (M(0, 0) == M(1, 1)) return std::nullopt;  // keep chains distinct for variety

  Sample s;
  s.data = data_for("(1)(1),(1)(1)",
                    {{{xa}, {xb}}, {{M(0, 0)}, {M(1, 1)}}});
  s.tuple.pts = {{A0res, A0lead}, {A1res, g * lead1 * ginv}};
  return s;
}

// Moduli-level addition: shifts residues by v_i I with sum_i v_i = 0 and
// shifts the eigenvalue chains accordingly.
void apply_moduli_addition(Sample& s, std::mt19937_64& rng) {
  const int np = s.tuple.num_points();
  if (np < 2) return;
  std::vector<Rat> v(np, Rat(0));
  Rat sum = 0;
  for (int i = 1; i < np; ++i) {
    v[i] = rnd_rat(rng);
    sum += v[i];
  }
  v[0] = -sum;
  for (int i = 0; i < np; ++i) {
    s.tuple.pts[i][0] = s.tuple.pts[i][0] + v[i] * RatMatrix::identity(s.tuple.rank());
    for (auto& chain : s.data.xi[i])
      for (auto& val : chain) val += v[i];
  }
}

}  // namespace

std::optional<JTuple> pick_mc_choice(const Sample& s, std::mt19937_64& rng) {
  auto model = quiver_model(s.data.st);
  auto tuples = all_tuples(model);
  std::shuffle(tuples.begin(), tuples.end(), rng);
  for (const auto& t : tuples) {
    Rat xi = 0;
    for (int i = 0; i < model.num_points(); ++i) xi += s.data.xi[i][t.j[i] - 1][0];
    if (xi == 0) continue;
    CanonicalDatum cd;
    {
      HTLTuple tmp = s.tuple;
      for (int i = 0; i < tmp.num_points(); ++i) {
        std::vector<Rat> poly(tmp.pole_order(i), Rat(0));
        poly[0] = s.data.xi[i][t.j[i] - 1][0];
        for (size_t v = 0; v + 1 < poly.size(); ++v) poly[v + 1] = s.data.qcoef[i][t.j[i] - 1][v];
        tmp = addition(static_cast<int>(i), poly, tmp);
      }
      cd = canonical_datum(tmp);
    }
    if (cd.dim_w() <= s.tuple.rank()) continue;
    std::string why;
    auto pred = predict_mc_data(s.data, t, cd.dim_w(), &why);
    if (!pred) continue;
    return t;
  }
  return std::nullopt;
}

std::vector<Sample> generate_samples(int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < count && ++guard < 100000) {
    std::optional<Sample> s;
    switch (rng() % 5) {
      case 0: s = seed_fuchsian(rng); break;
      case 1: s = seed_pole2(rng); break;
      case 2: s = seed_pole2_3pts(rng); break;
      case 3: s = seed_pole3(rng); break;
      default: s = seed_two_pole2(rng); break;
    }
    if (!s) continue;
    try {
      validate_symbol_data(s->data);
    } catch (const std::exception&) {
      continue;
    }
    if (!s->tuple.residue_sum_zero() || !is_irreducible(s->tuple)) continue;
    if (rng() % 2) apply_moduli_addition(*s, rng);

    // Grow by a few middle convolutions, keeping rank <= 4.
    int steps = static_cast<int>(rng() % 3);
    for (int step = 0; step < steps; ++step) {
      std::mt19937_64 sub(rng());
      auto choice = pick_mc_choice(*s, sub);
      if (!choice) break;
      McResult res;
      try {
        res = middle_convolution(s->tuple, *choice, s->data);
      } catch (const MathError&) {
        break;
      }
      if (!res.out_data || res.out_rank < 1 || res.out_rank > 4) break;
      Sample nxt{std::move(res.out), std::move(*res.out_data)};
      if (!nxt.tuple.residue_sum_zero() || !is_irreducible(nxt.tuple)) break;
      *s = std::move(nxt);
    }
    std::mt19937_64 sub(rng());
    if (!pick_mc_choice(*s, sub)) continue;  // every sample admits a valid mc
    out.push_back(std::move(*s));
  }
  if (static_cast<int>(out.size()) < count)
    throw std::runtime_error("sample generator failed to reach the requested count");
  return out;
}

}  // namespace spectra
