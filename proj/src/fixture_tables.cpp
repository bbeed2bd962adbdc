#include <stdexcept>

#include "spectra/enumerate.hpp"

// Transcriptions of the published classification tables for rigidity index
// 0 and -2: the diagrams with their (possibly parametric) coefficients, the
// spectral-type strings printed next to them, and the W^inv labels. Star
// diagrams carry their Fuchsian representative.

namespace spectra {

namespace {

struct NodeSpec {
  long long base;
  std::vector<long long> params;
};

Shape make_shape(int n_params, std::vector<NodeSpec> nodes,
                 std::vector<std::tuple<int, int, long long>> edges) {
  Shape s;
  s.n_params = n_params;
  const int n = static_cast<int>(nodes.size());
  s.gram.assign(n, std::vector<long long>(n, 0));
  for (int u = 0; u < n; ++u) {
    s.ids.push_back("n" + std::to_string(u));
    s.gram[u][u] = 2;
    s.coeff_base.push_back(nodes[u].base);
    nodes[u].params.resize(n_params, 0);
    s.coeff_params.push_back(nodes[u].params);
  }
  for (auto [u, v, mult] : edges) {
    s.gram[u][v] = -mult;
    s.gram[v][u] = -mult;
  }
  return s;
}

// Star diagram with constant coefficients: center plus simple-edge arms
// (coefficients listed from the center outward).
Shape star_shape(long long center, std::vector<std::vector<long long>> arms) {
  std::vector<NodeSpec> nodes{{center, {}}};
  std::vector<std::tuple<int, int, long long>> edges;
  for (const auto& arm : arms) {
    int prev = 0;
    for (long long c : arm) {
      nodes.push_back({c, {}});
      int cur = static_cast<int>(nodes.size()) - 1;
      edges.emplace_back(prev, cur, 1);
      prev = cur;
    }
  }
  return make_shape(0, std::move(nodes), std::move(edges));
}

}  // namespace

FixtureTable builtin_fixture(long long idx) {
  FixtureTable t;
  t.idx = idx;
  auto add = [&](std::string name, Shape shape, std::vector<std::string> types, std::string winv) {
    t.entries.push_back(FixtureEntry{std::move(name), std::move(shape), std::move(types), std::move(winv)});
  };

  if (idx == 0) {
    add("E6_affine_star", star_shape(3, {{2, 1}, {2, 1}, {2, 1}}), {"111,111,111"}, "E6(1)");
    add("E7_affine_star", star_shape(4, {{3, 2, 1}, {3, 2, 1}, {2}}), {"1111,1111,22"}, "E7(1)");
    add("E8_affine_star", star_shape(6, {{5, 4, 3, 2, 1}, {4, 2}, {3}}), {"111111,222,33"},
        "E8(1)");
    add("D4_affine_star", star_shape(2, {{1}, {1}, {1}, {1}}), {"11,11,11,11"}, "D4(1)");
    add("square",
        make_shape(0, {{1}, {1}, {1}, {1}}, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}}),
        {"(1)(1),11,11", "((1)(1))((1)(1))"}, "A3(1)");
    add("triangle", make_shape(0, {{1}, {1}, {1}}, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}}),
        {"((1))((1)),11", "((1))((1))((1))"}, "A2(1)");
    add("double_edge_pair", make_shape(0, {{1}, {1}}, {{0, 1, 2}}), {"(((1)))(((1)))"}, "A1(1)");
    add("two_double_edges",
        make_shape(1, {{0, {1}}, {0, {1}}, {1, {-1}}, {1, {-1}}}, {{0, 1, 2}, {2, 3, 2}}),
        {"(1)(1),(1)(1)"}, "A1(1)xA1(1)");
    return t;
  }

  if (idx == -2) {
    // Tuples enumerated as t11, t12, t21, t22 (block choices per point).
    add("single_triple_cycle",
        make_shape(1, {{0, {1}}, {1, {-1}}, {1, {-1}}, {0, {1}}},
                   {{0, 2, 1}, {1, 3, 1}, {0, 3, 3}, {1, 2, 3}}),
        {"((1))((1)),(1)(1)"}, "");
    add("two_doubles_center_leg",
        make_shape(1, {{0, {1}}, {1, {-1}}, {1, {-1}}, {0, {1}}, {1, {}}},
                   {{0, 3, 2}, {1, 2, 2}, {4, 0, 1}, {4, 1, 1}, {4, 2, 1}, {4, 3, 1}}),
        {"(1)(1),(1)(1),11"}, "A1");
    add("two_doubles_two_legs",
        make_shape(1, {{0, {1}}, {1, {-1}}, {1, {-1}}, {1, {1}}, {1, {}}, {1, {}}},
                   {{0, 3, 2}, {1, 2, 2}, {4, 2, 1}, {4, 3, 1}, {5, 1, 1}, {5, 3, 1}}),
        {"(1)(11),(1)(11)"}, "A3");
    add("doubles_path_leg",
        make_shape(1, {{0, {1}}, {2, {-1}}, {2, {-1}}, {0, {1}}, {1, {}}},
                   {{0, 3, 2}, {1, 2, 2}, {4, 1, 1}, {4, 3, 1}}),
        {"(2)(2),(2)(11)"}, "A1xA1xA1");
    add("six_tuples_two_params",
        make_shape(2,
                   {{0, {1, 0}}, {0, {0, 1}}, {2, {-1, -1}}, {1, {-1, 0}}, {1, {0, -1}}, {-1, {1, 1}}},
                   {{0, 4, 2}, {0, 5, 2}, {1, 3, 2}, {1, 5, 2}, {2, 3, 2}, {2, 4, 2}}),
        {"(1)(1)(1),(2)(1)"}, "A1xA1xA1");
    add("doubles_leg_chain",
        make_shape(1, {{0, {1}}, {2, {-1}}, {1, {-1}}, {1, {1}}, {2, {}}, {1, {}}},
                   {{0, 3, 2}, {1, 2, 2}, {4, 1, 1}, {4, 3, 1}, {4, 5, 1}}),
        {"(2)(2),(1)(111)"}, "D4");
    add("triple_edge_pair", make_shape(0, {{1}, {1}}, {{0, 1, 3}}), {"((((1))))((((1))))"}, "");
    add("double_edge_tail", make_shape(0, {{2}, {2}, {1}}, {{0, 1, 2}, {1, 2, 1}}),
        {"(((2)))(((11)))"}, "A1xA1");
    add("double_double_path", make_shape(0, {{1}, {1}, {1}}, {{0, 2, 2}, {1, 2, 2}}),
        {"(((1)(1)))(((1)))"}, "A1xA1");
    add("double_edge_triangle",
        make_shape(0, {{1}, {1}, {1}}, {{0, 1, 2}, {0, 2, 1}, {1, 2, 1}}), {"(((1)))(((1))),11"},
        "A1");
    add("five_star", star_shape(2, {{1}, {1}, {1}, {1}, {1}}), {"11,11,11,11,11"},
        "A1xA1xA1xA1xA1");
    add("d4a1_star", star_shape(4, {{2}, {2}, {2}, {2, 1}}), {"22,22,22,211"}, "D4xA1");
    add("a5_star", star_shape(3, {{2, 1}, {2, 1}, {1}, {1}}), {"111,111,21,21"}, "A5");
    add("d6_star", star_shape(4, {{3, 2, 1}, {2}, {2}, {1}}), {"31,1111,22,22"}, "D6");
    add("e6a1_star", star_shape(6, {{4, 2}, {4, 2}, {4, 2, 1}}), {"2211,222,222"}, "E6xA1");
    add("a7a1_star", star_shape(4, {{3, 2, 1}, {3, 2, 1}, {2, 1}}), {"1111,1111,211"}, "A7xA1");
    add("e7a1_star", star_shape(8, {{6, 4, 2, 1}, {6, 4, 2}, {4}}), {"22211,2222,44"}, "E7xA1");
    add("d8a1_star", star_shape(6, {{5, 4, 3, 2, 1}, {4, 2, 1}, {3}}), {"111111,2211,33"},
        "D8xA1");
    add("e8a1_star", star_shape(12, {{10, 8, 6, 4, 2, 1}, {8, 4}, {6}}), {"2222211,444,66"},
        "E8xA1");
    add("a9_star", star_shape(5, {{4, 3, 2, 1}, {4, 3, 2, 1}, {2}}), {"11111,11111,32"}, "A9");
    add("d10_star", star_shape(8, {{7, 6, 5, 4, 3, 2, 1}, {5, 2}, {4}}), {"11111111,332,44"},
        "D10");
    add("e8_star", star_shape(10, {{7, 4, 1}, {8, 6, 4, 2}, {5}}), {"3331,22222,55"}, "E8");
    add("d7_star", star_shape(5, {{3, 1}, {3, 1}, {4, 3, 2, 1}}), {"221,221,11111"}, "D7");
    add("triangle_tail",
        make_shape(0, {{2}, {2}, {2}, {1}}, {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}}),
        {"((2))((2))((11))", "((2))((11)),22", "((2))((2)),211"}, "A2xA1");
    add("triangle_two_tails",
        make_shape(0, {{2}, {2}, {1}, {1}, {1}},
                   {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}, {0, 3, 1}, {1, 4, 1}}),
        {"((11))((11))((1))", "((11))((1)),111", "((11))((11)),31"}, "A4");
    add("square_tail",
        make_shape(0, {{2}, {2}, {2}, {2}, {1}},
                   {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 4, 1}}),
        {"((2)(2))((2)(11))", "(2)(2),22,211", "(2)(11),22,22"}, "A3xA1");
    add("square_two_tails",
        make_shape(0, {{2}, {2}, {1}, {2}, {1}, {1}},
                   {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {1, 4, 1}, {3, 5, 1}}),
        {"((11)(11))((2)(1))", "(11)(11),22,31", "(2)(1),111,111"}, "A5");
    add("square_arm",
        make_shape(0, {{3}, {2}, {1}, {2}, {2}, {1}},
                   {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 0, 1}, {0, 4, 1}, {4, 5, 1}}),
        {"((1)(111))((2)(2))", "(1)(111),22,22", "(2)(2),31,1111"}, "D5");
    add("k23",
        make_shape(0, {{1}, {1}, {1}, {1}, {1}},
                   {{0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {1, 2, 1}, {1, 3, 1}, {1, 4, 1}}),
        {"((1)(1))((1)(1)(1))", "(1)(1),11,11,11", "(1)(1)(1),21,21"}, "A1xA1xA1");
    add("k4_minus_edge",
        make_shape(0, {{1}, {1}, {1}, {1}},
                   {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 3, 1}, {2, 3, 1}}),
        {"((1))((1))((1)(1))", "((1))((1)),11,11"}, "A1xA1");
    return t;
  }

  throw std::invalid_argument("no builtin fixture for idx " + std::to_string(idx));
}

}  // namespace spectra
