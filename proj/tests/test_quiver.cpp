#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "spectra/quiver.hpp"

using namespace spectra;

namespace {

// Square quiver of the two-pole-2-points example: K_{2,2}, arrows [0,*] -> [1,*].
Quiver square_quiver() {
  Quiver q({VertexTag::irr(0, 1), VertexTag::irr(0, 2), VertexTag::irr(1, 1), VertexTag::irr(1, 2)});
  q.add_arrows(0, 2, 1);
  q.add_arrows(0, 3, 1);
  q.add_arrows(1, 2, 1);
  q.add_arrows(1, 3, 1);
  return q;
}

// D4 star: center [0,1] with four legs.
Quiver d4_star() {
  Quiver q({VertexTag::irr(0, 1), VertexTag::leg(1, 1, 1), VertexTag::leg(2, 1, 1),
            VertexTag::leg(3, 1, 1), VertexTag::leg(4, 1, 1)});
  for (int leg = 1; leg <= 4; ++leg) q.add_arrows(leg, 0, 1);
  return q;
}

Quiver random_quiver(std::mt19937_64& rng, int n, bool allow_loops = false) {
  std::vector<VertexTag> tags;
  for (int i = 0; i < n; ++i) tags.push_back(VertexTag::irr(i, 1));
  Quiver q(std::move(tags));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t && !allow_loops) continue;
      if (rng() % 3 == 0) q.add_arrows(s, t, 1 + rng() % 2);
    }
  return q;
}

DimVector random_vec(std::mt19937_64& rng, int n, int lo, int hi) {
  DimVector v(n);
  for (auto& x : v) x = lo + static_cast<long long>(rng() % (hi - lo + 1));
  return v;
}

}  // namespace

TEST_CASE("euler form on the square quiver") {
  Quiver q = square_quiver();
  DimVector a{1, 1, 1, 1};
  CHECK(euler_form(q, a, a) == 0);  // 4 - 4
  CHECK(euler_form(q, a, DimVector{0, 0, 0, 0}) == 0);
  CHECK(tits_q(q, a) == 0);
  CHECK(p_val(q, a) == 1);

  Quiver one({VertexTag::irr(0, 1)});
  CHECK(euler_form(one, {1}, {1}) == 1);

  CHECK_THROWS_AS(euler_form(q, {1, 1}, a), std::invalid_argument);
}

TEST_CASE("simple roots and reflections") {
  Quiver q = square_quiver();
  for (int v = 0; v < 4; ++v) {
    DimVector e(4, 0);
    e[v] = 1;
    CHECK(sym_form(q, e, e) == 2);
    CHECK(tits_q(q, e) == 1);
    CHECK(p_val(q, e) == 0);
    DimVector r = simple_reflection(q, v, e);
    DimVector me(4, 0);
    me[v] = -1;
    CHECK(r == me);
  }
}

TEST_CASE("D4 star center reflection") {
  Quiver q = d4_star();
  DimVector a{2, 1, 1, 1, 1};
  CHECK(tits_q(q, a) == 0);
  DimVector ones{1, 1, 1, 1, 1};
  DimVector r = simple_reflection(q, 0, ones);
  CHECK(r[0] == 3);  // (a, eps_c) = 2 - 4 = -2
}

TEST_CASE("reflection refuses edge-loops") {
  Quiver q({VertexTag::irr(0, 1)});
  q.add_arrows(0, 0, 1);
  CHECK_THROWS_AS(simple_reflection(q, 0, {1}), std::invalid_argument);
  CHECK_THROWS_AS(lambda_reflection(q, 0, {Rat(1)}), std::invalid_argument);
}

TEST_CASE("reflections are involutions and preserve the form") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    Quiver q = random_quiver(rng, 2 + rng() % 4);
    int n = q.size();
    DimVector u = random_vec(rng, n, -3, 3), v = random_vec(rng, n, -3, 3);
    for (int a = 0; a < n; ++a) {
      CHECK(simple_reflection(q, a, simple_reflection(q, a, u)) == u);
      CHECK(sym_form(q, simple_reflection(q, a, u), simple_reflection(q, a, v)) == sym_form(q, u, v));
      CHECK(tits_q(q, simple_reflection(q, a, u)) == tits_q(q, u));
    }
  }
}

TEST_CASE("lambda reflection: involution and duality") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 200; ++it) {
    Quiver q = random_quiver(rng, 2 + rng() % 4);
    int n = q.size();
    ParamVector l(n);
    for (auto& x : l) x = Rat(static_cast<long long>(rng() % 19) - 9, 1 + rng() % 4);
    DimVector v = random_vec(rng, n, -3, 3);
    for (int a = 0; a < n; ++a) {
      ParamVector rl = lambda_reflection(q, a, l);
      CHECK(lambda_reflection(q, a, rl) == l);
      // r_a(l) . v = l . s_a(v)
      CHECK(dot(rl, v) == dot(l, simple_reflection(q, a, v)));
      CHECK(rl[a] == -l[a]);
    }
    ParamVector zero(n, Rat(0));
    CHECK(lambda_reflection(q, 0, zero) == zero);
  }
}

TEST_CASE("support connectivity") {
  Quiver q = square_quiver();
  CHECK(support_connected(q, {1, 0, 0, 0}));
  CHECK(support_connected(q, {1, 1, 1, 1}));
  Quiver two({VertexTag::irr(0, 1), VertexTag::irr(1, 1)});
  CHECK_FALSE(support_connected(two, {1, 1}));
  CHECK_THROWS_AS(support_connected(q, {-1, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("fundamental set membership") {
  Quiver q = square_quiver();
  DimVector e{1, 0, 0, 0};
  CHECK_FALSE(is_in_fundamental_set(q, e));
  CHECK(is_in_fundamental_set(q, {1, 1, 1, 1}));
  Quiver star = d4_star();
  CHECK(is_in_fundamental_set(star, {2, 1, 1, 1, 1}));
  CHECK_THROWS_AS(is_in_fundamental_set(q, {0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("root classification") {
  Quiver q = square_quiver();
  CHECK(classify_root(q, {1, 0, 0, 0}) == RootKind::RealRoot);
  CHECK(classify_root(q, {1, 1, 1, 1}) == RootKind::ImaginaryRoot);
  Quiver two({VertexTag::irr(0, 1), VertexTag::irr(1, 1)});
  CHECK(classify_root(two, {1, 1}) == RootKind::NotRoot);
  CHECK(classify_root(two, {1, -1}) == RootKind::NotRoot);
  CHECK_THROWS_AS(classify_root(q, {0, 0, 0, 0}), std::invalid_argument);
}

// Brute-force oracle: the set of roots reachable by short reflection words
// from simple roots and the fundamental set.
TEST_CASE("classify_root agrees with orbit enumeration") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 12; ++it) {
    Quiver q = random_quiver(rng, 2 + rng() % 2);
    const int n = q.size();

    // Enumerate all |v| <= 4 vectors; compute roots by the definition:
    // w(simple) for words up to length 6, and w(F u -F).
    std::set<DimVector> roots;
    std::vector<DimVector> frontier;
    for (int a = 0; a < n; ++a) {
      if (q.has_loop(a)) continue;
      DimVector e(n, 0);
      e[a] = 1;
      frontier.push_back(e);
      e[a] = -1;
      frontier.push_back(e);
    }
    // All fundamental-set vectors within the box.
    std::vector<DimVector> box;
    DimVector cur(n, 0);
    std::function<void(int)> fill = [&](int i) {
      if (i == n) {
        box.push_back(cur);
        return;
      }
      for (int x = 0; x <= 4; ++x) {
        cur[i] = x;
        fill(i + 1);
      }
    };
    fill(0);
    for (const auto& v : box) {
      bool zero = std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
      if (zero) continue;
      if (is_in_fundamental_set(q, v)) {
        frontier.push_back(v);
        DimVector neg = v;
        for (auto& x : neg) x = -x;
        frontier.push_back(neg);
      }
    }
    for (const auto& v : frontier) roots.insert(v);
    for (int word = 0; word < 6 && roots.size() < 20000; ++word) {
      std::vector<DimVector> next;
      for (const auto& v : frontier)
        for (int a = 0; a < n; ++a) {
          if (q.has_loop(a)) continue;
          DimVector w = simple_reflection(q, a, v);
          if (roots.insert(w).second) next.push_back(w);
        }
      frontier = std::move(next);
    }

    for (const auto& v : box) {
      bool zero = std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
      if (zero) continue;
      bool small = std::all_of(v.begin(), v.end(), [](long long x) { return x <= 2; });
      if (!small) continue;  // orbit to word length 6 is only complete near the origin
      RootKind k = classify_root(q, v);
      if (k == RootKind::NotRoot) {
        CHECK_FALSE(roots.count(v));
      }
      // Positive roots found by the orbit search must classify as roots.
      if (roots.count(v)) CHECK(k != RootKind::NotRoot);
    }
  }
}

TEST_CASE("quiver json round-trip") {
  Quiver q = square_quiver();
  Quiver r = Quiver::from_json(q.to_json());
  CHECK(r.size() == q.size());
  for (int s = 0; s < q.size(); ++s)
    for (int t = 0; t < q.size(); ++t) CHECK(r.arrows(s, t) == q.arrows(s, t));
  CHECK(r.tag(0) == VertexTag::irr(0, 1));
}
