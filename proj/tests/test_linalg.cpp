#include "doctest.h"

#include "ncd/linalg.hpp"
#include "ncd/random.hpp"

using ncd::Rational;
using ncd::RationalMatrix;

TEST_CASE("exact rank") {
  CHECK(ncd::exact_rank({{1, 0}, {0, 1}}) == 2);
  CHECK(ncd::exact_rank({{-2, 0}, {2, 0}}) == 1);
  CHECK(ncd::exact_rank({{0, 0, 0}}) == 0);
  CHECK(ncd::exact_rank({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}}) == 2);
}

TEST_CASE("row span membership") {
  RationalMatrix rows = {{0, 1}};
  CHECK_FALSE(ncd::exact_in_row_span(rows, {1, 0}));
  CHECK(ncd::exact_in_row_span({{1, 0}, {0, 1}}, {1, 0}));
  CHECK(ncd::exact_in_row_span({{2, 0, 1}}, {Rational(1), 0, Rational(1, 2)}));
}

TEST_CASE("exact inverse") {
  RationalMatrix m = {{2, 1}, {1, 1}};
  auto inv = ncd::exact_inverse(m);
  CHECK(inv == RationalMatrix{{1, -1}, {-1, 2}});
  CHECK_THROWS_AS(ncd::exact_inverse({{1, 2}, {2, 4}}), ncd::InputError);
}

TEST_CASE("property: inverse times matrix is identity") {
  ncd::Rng rng(5);
  int done = 0;
  while (done < 50) {
    RationalMatrix m(4, ncd::RationalVector(4));
    for (auto& row : m) {
      for (auto& v : row) v = static_cast<long>(rng.index(9)) - 4;
    }
    if (ncd::exact_rank(m) < 4) continue;
    auto inv = ncd::exact_inverse(m);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        Rational s = 0;
        for (std::size_t k = 0; k < 4; ++k) s += m[i][k] * inv[k][j];
        CHECK(s == (i == j ? 1 : 0));
      }
    }
    ++done;
  }
}

TEST_CASE("numerical rank and span residual") {
  auto r = ncd::numerical_rank({{-2, 0, 0, 0}}, 1e-8);
  CHECK(r.rank == 1);
  auto tangent = ncd::numerical_rank({{-2, 0}, {2, 0}}, 1e-8);
  CHECK(tangent.rank == 1);
  CHECK(tangent.ratio < 1e-12);
  auto near = ncd::numerical_rank({{1, 0}, {1, 1e-12}}, 1e-8);
  CHECK(near.rank == 1);

  CHECK(ncd::span_residual({{0, 1}}, {1, 0}) == doctest::Approx(1.0));
  CHECK(ncd::span_residual({{1, 1}, {0, 1}}, {1, 0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("damped step solves an underdetermined system") {
  ncd::DoubleMatrix J = {{1, 1}};
  auto s = ncd::damped_min_norm_step(J, {2}, 0.0);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == doctest::Approx(1.0));
  CHECK(s[1] == doctest::Approx(1.0));
}
