#include "doctest.h"

#include <queue>

#include "ncd/primitive.hpp"
#include "ncd/random.hpp"

using ncd::Polynomial;
using ncd::Rational;
using ncd::RationalVector;
using ncd::Side;

namespace {

Polynomial P(const char* text, std::size_t k) { return Polynomial::parse(text, k); }

// 4-connected components of {f > 0} on a square grid, by BFS.
int positive_components(const Polynomial& f, double lo, double hi, double step) {
  const int N = static_cast<int>((hi - lo) / step) + 1;
  std::vector<int> label(static_cast<std::size_t>(N * N), -1);
  auto pos = [&](int i, int k) {
    std::vector<double> x = {lo + i * step, lo + k * step};
    return f.eval(std::span<const double>(x)) > 0;
  };
  int comps = 0;
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < N; ++i) {
      if (label[k * N + i] >= 0 || !pos(i, k)) continue;
      std::queue<std::pair<int, int>> q;
      q.push({i, k});
      label[k * N + i] = comps;
      while (!q.empty()) {
        auto [a, b] = q.front();
        q.pop();
        const int di[4] = {1, -1, 0, 0}, dk[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          int u = a + di[d], v = b + dk[d];
          if (u < 0 || v < 0 || u >= N || v >= N || label[v * N + u] >= 0 || !pos(u, v)) continue;
          label[v * N + u] = comps;
          q.push({u, v});
        }
      }
      ++comps;
    }
  }
  return comps;
}

}  // namespace

TEST_CASE("half_plane examples") {
  auto a = ncd::half_plane({0, 0}, {0, 1}, Side::plus);
  CHECK(a.f() == P("x1", 2));
  auto b = ncd::half_plane({0, 0}, {1, 0}, Side::plus);
  CHECK(b.f() == P("x2", 2));
  auto c = ncd::half_plane({0, 1}, {1, 1}, Side::minus);
  CHECK(c.f() == P("1 - x2", 2));
  CHECK(c.component().empty());
  CHECK(c.f().eval(c.witness()) > 0);
  CHECK_THROWS_AS(ncd::half_plane({1, 2}, {1, 2}, Side::plus), ncd::InputError);
}

TEST_CASE("hyperbola_region examples") {
  auto h = ncd::hyperbola_region(ncd::HyperbolaVariant::left_ray, 2, 0, 1);
  CHECK(h.f() == P("1 - (x1 - 2)*x2", 2));
  CHECK(h.f().eval(RationalVector{2, 0}) == 1);
  CHECK(h.f().eval(RationalVector{3, 1}) == 0);
  CHECK(h.component().contains(RationalVector{3, 1}));
  CHECK_FALSE(h.component().contains(RationalVector{1, -1}));
  CHECK(h.f().eval(RationalVector{4, 1}) == -1);
  CHECK(h.other_components().size() == 1);

  auto r = ncd::hyperbola_region(ncd::HyperbolaVariant::right_ray, 0, 0, -1);
  CHECK(r.f() == P("x1*x2 + 1", 2));
  CHECK(r.f().eval(RationalVector{0, 0}) == 1);

  CHECK_THROWS_AS(ncd::hyperbola_region(ncd::HyperbolaVariant::left_ray, 0, 0, -1), ncd::InputError);
  CHECK_THROWS_AS(ncd::hyperbola_region(ncd::HyperbolaVariant::right_ray, 0, 0, 1), ncd::InputError);
}

TEST_CASE("hyperbola region is a single component between the branches") {
  // Grid oracle over [-10, 10]^2 at step 0.05.
  auto h = ncd::hyperbola_region(ncd::HyperbolaVariant::left_ray, 2, 0, 1);
  CHECK(positive_components(h.f(), -10, 10, 0.05) == 1);
  CHECK(positive_components(-h.f(), -10, 10, 0.05) == 2);
}

TEST_CASE("ellipsoid examples") {
  auto body = ncd::ellipsoid({0, 0}, {4, 1}, false);
  CHECK(body.f().eval(RationalVector{0, 0}) == 1);
  CHECK(body.f().eval(RationalVector{2, 0}) == 0);
  CHECK(body.kind() == ncd::PrimitiveKind::ellipsoid_body);

  Rational eps2(1, 100);
  auto hole = ncd::ellipsoid({Rational(3, 2), Rational(1, 2), 0}, {Rational(1, 4), eps2, eps2}, true);
  CHECK(hole.f().eval(RationalVector{1, Rational(1, 2), 0}) == 0);
  CHECK(hole.f().eval(RationalVector{2, Rational(1, 2), 0}) == 0);
  CHECK(hole.f().eval(RationalVector{Rational(3, 2), Rational(1, 2), 0}) == -1);
  CHECK(hole.f().eval(hole.witness()) > 0);

  auto seg = ncd::ellipsoid({0}, {1}, false);
  CHECK(seg.f() == P("1 - x1^2", 1));
  CHECK(seg.f().eval(RationalVector{-1}) == 0);
  CHECK(seg.f().eval(RationalVector{1}) == 0);

  CHECK_THROWS_AS(ncd::ellipsoid({0, 0}, {1, 0}, false), ncd::InputError);
  CHECK_THROWS_AS(ncd::ellipsoid({0, 0}, {1}, false), ncd::InputError);
}

TEST_CASE("embed_plane_primitive examples") {
  auto h = ncd::hyperbola_region(ncd::HyperbolaVariant::left_ray, 2, 0, 1);
  auto e = ncd::embed_plane_primitive(h, 5, 3);
  CHECK(e.f() == P("1 - (x1 - 2)*x4", 5));
  CHECK(e.kind() == ncd::PrimitiveKind::cylinder);
  CHECK(e.base_kind() == ncd::PrimitiveKind::hyperbola_region);
  CHECK(e.metadata_consistent());

  auto hp = ncd::half_plane({0, 0}, {1, 0}, Side::plus);
  CHECK(ncd::embed_plane_primitive(hp, 5, 3).f() == P("x4", 5));
  auto same = ncd::embed_plane_primitive(hp, 2, 1);
  CHECK(same.f() == hp.f());
  CHECK(same.kind() == ncd::PrimitiveKind::half_plane);

  CHECK_THROWS_AS(ncd::embed_plane_primitive(hp, 5, 0), ncd::InputError);
  CHECK_THROWS_AS(ncd::embed_plane_primitive(hp, 5, 5), ncd::InputError);
}

TEST_CASE("region_R examples") {
  auto flat = ncd::region_R(ncd::RegionKind::flat, {0, 1}, 0, 1);
  REQUIRE(flat.size() == 3);
  CHECK(flat[0].f() == P("x2", 2));
  CHECK(flat[1].f() == P("x1*x2 + 1", 2));
  CHECK(flat[2].f() == P("1 - (x1 - 1)*x2", 2));

  auto plus = ncd::region_R(ncd::RegionKind::plus, {0, 1, 2}, 1, 1);
  CHECK(plus.size() == 4);
  auto minus = ncd::region_R(ncd::RegionKind::minus, {0, 1, 2}, 1, 1);
  CHECK(minus.size() == 4);

  try {
    ncd::region_R(ncd::RegionKind::plus, {0, 1, 2}, 1, 2);
    FAIL("incidence violation accepted");
  } catch (const ncd::InputError& e) {
    CHECK(std::string(e.what()).find("= -1") != std::string::npos);
  }
  CHECK_THROWS_AS(ncd::region_R(ncd::RegionKind::flat, {1, 0}, 0, 1), ncd::InputError);
  CHECK_THROWS_AS(ncd::region_R(ncd::RegionKind::flat, {0, 1}, 0, 0), ncd::InputError);
}

TEST_CASE("property: the witness is strictly inside and metadata rebuilds f") {
  ncd::Rng rng(3);
  auto rnd = [&](int span) { return Rational(static_cast<long>(rng.index(2 * span + 1)) - span, 2); };
  for (int it = 0; it < 200; ++it) {
    std::vector<ncd::Primitive> prims;
    ncd::Point2 p1{rnd(6), rnd(6)}, p2{rnd(6), rnd(6)};
    if (p1 != p2) prims.push_back(ncd::half_plane(p1, p2, rng.index(2) ? Side::plus : Side::minus));
    Rational c = rnd(6);
    if (c > 0) prims.push_back(ncd::hyperbola_region(ncd::HyperbolaVariant::left_ray, rnd(4), rnd(4), c));
    if (c < 0) prims.push_back(ncd::hyperbola_region(ncd::HyperbolaVariant::right_ray, rnd(4), rnd(4), c));
    prims.push_back(ncd::ellipsoid({rnd(4), rnd(4)}, {Rational(1 + rng.index(5)), Rational(1 + rng.index(5), 3)},
                                   rng.index(2) == 0));
    for (const auto& p : prims) {
      CHECK(p.f().eval(p.witness()) > 0);
      CHECK(p.metadata_consistent());
      auto e = ncd::embed_plane_primitive(p, 4, 1 + rng.index(3));
      CHECK(e.f().eval(e.witness()) > 0);
      CHECK(e.metadata_consistent());
      CHECK(e.other_components().size() == p.other_components().size());
    }
  }
}

TEST_CASE("property: hyperbola branches partition the zero set") {
  ncd::Rng rng(4);
  auto h = ncd::hyperbola_region(ncd::HyperbolaVariant::right_ray, 1, -1, -2);
  const auto& data = std::get<ncd::HyperbolaData>(h.data());
  for (int it = 0; it < 500; ++it) {
    // Points on (x1 - 1)(x2 + 1) = -2.
    double u = rng.uniform(-5, 5);
    if (std::abs(u) < 1e-3) continue;
    std::vector<double> x = {1 + u, -1 - 2 / u};
    CHECK(data.plus_branch.contains(std::span<const double>(x)) !=
          data.minus_branch.contains(std::span<const double>(x)));
  }
}
