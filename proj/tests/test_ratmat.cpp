#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spectra/ratmat.hpp"

using namespace spectra;

namespace {
RatMatrix random_matrix(std::mt19937_64& rng, int r, int c) {
  RatMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      m(i, j) = Rat(static_cast<long long>(rng() % 41) - 20, 1 + rng() % 3);
  return m;
}
}  // namespace

TEST_CASE("basic arithmetic") {
  RatMatrix a(2, 2), b(2, 2);
  a(0, 0) = Rat(1, 2);
  a(0, 1) = 1;
  a(1, 1) = 3;
  b(0, 0) = 2;
  b(1, 0) = Rat(-1, 3);
  RatMatrix s = a + b;
  CHECK(s(0, 0) == Rat(5, 2));
  RatMatrix p = a * b;
  CHECK(p(0, 0) == 1 - Rat(1, 3));
  CHECK((a - a).is_zero());
  CHECK(RatMatrix::identity(3) * RatMatrix::identity(3) == RatMatrix::identity(3));
  CHECK_THROWS_AS(a * RatMatrix(3, 3), std::invalid_argument);
}

TEST_CASE("rank, kernel, solve, inverse are consistent") {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 60; ++it) {
    int r = 1 + rng() % 5, c = 1 + rng() % 5;
    RatMatrix m = random_matrix(rng, r, c);
    int rk = rank(m);
    RatMatrix k = kernel_basis(m);
    CHECK(rk + k.cols() == c);
    CHECK((m * k).is_zero());

    // m * x = m * y is always solvable and the residual vanishes.
    RatMatrix y = random_matrix(rng, c, 1);
    auto x = solve(m, m * y);
    REQUIRE(x.has_value());
    CHECK((m * *x - m * y).is_zero());

    if (r == c) {
      auto inv = inverse(m);
      if (determinant(m) == 0) {
        CHECK_FALSE(inv.has_value());
      } else {
        REQUIRE(inv.has_value());
        CHECK(*inv * m == RatMatrix::identity(r));
      }
    }
  }
}

TEST_CASE("solve reports inconsistency") {
  RatMatrix m(2, 1);
  m(0, 0) = 1;
  m(1, 0) = 1;
  RatMatrix b(2, 1);
  b(0, 0) = 1;
  b(1, 0) = 2;
  CHECK_FALSE(solve(m, b).has_value());
}

TEST_CASE("pivot rows index a complement of the column span") {
  std::mt19937_64 rng(9);
  for (int it = 0; it < 40; ++it) {
    int r = 2 + rng() % 4, c = 1 + rng() % static_cast<int>(r);
    RatMatrix m = random_matrix(rng, r, c);
    auto piv = pivot_rows(m);
    CHECK(static_cast<int>(piv.size()) == rank(m));
    // [m | e_F] spans everything: rank r.
    RatMatrix aug(r, c + r - static_cast<int>(piv.size()));
    aug.set_block(0, 0, m);
    std::vector<char> is_piv(r, 0);
    for (int p : piv) is_piv[p] = 1;
    int col = c;
    for (int i = 0; i < r; ++i)
      if (!is_piv[i]) aug(i, col++) = 1;
    CHECK(rank(aug) == r);
  }
}

TEST_CASE("determinant multiplies") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 30; ++it) {
    RatMatrix a = random_matrix(rng, 3, 3), b = random_matrix(rng, 3, 3);
    CHECK(determinant(a * b) == determinant(a) * determinant(b));
  }
}
