#include "doctest.h"

#include <algorithm>
#include <set>

#include "ncd/construct.hpp"
#include "ncd/verify.hpp"

using ncd::ConstructionInput;
using ncd::Polynomial;
using ncd::Rational;
using ncd::RationalVector;
using ncd::Variant;

namespace {

Polynomial P(const char* text, std::size_t k) { return Polynomial::parse(text, k); }

std::vector<Polynomial> polys(const ncd::Arrangement& A) {
  std::vector<Polynomial> out;
  for (const auto& p : A.primitives()) out.push_back(p.f());
  return out;
}

// Random input: l in [2, 6], gaps in {1/2, 1, 3/2, 2}, random labels.
ConstructionInput random_input(ncd::Rng& rng, Variant v) {
  ConstructionInput in;
  in.variant = v;
  std::size_t l = 2 + rng.index(5);
  while (v == Variant::mt3 && l == 3) l = 2 + rng.index(5);
  Rational t(static_cast<long>(rng.index(5)) - 2, 2);
  t.canonicalize();
  for (std::size_t j = 0; j < l; ++j) {
    in.t.push_back(t);
    Rational gap(1 + static_cast<long>(rng.index(4)), 2);
    gap.canonicalize();
    t += gap;
  }
  for (std::size_t j = 0; j + 1 < l; ++j) in.labels.push_back(static_cast<int>(rng.index(2)));
  return in;
}

}  // namespace

TEST_CASE("validate names the violated precondition") {
  auto msg = [](ConstructionInput in) {
    try {
      ncd::validate(in);
    } catch (const ncd::InputError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg({{0, 1, 2}, {0, 0}, Variant::mt3}) == "MT3 requires l != 3");
  CHECK(msg({{0, 1, 1}, {0, 0}, Variant::mt2}).find("strictly increasing") != std::string::npos);
  CHECK(msg({{0}, {}, Variant::mt2}).find("l >= 2") != std::string::npos);
  CHECK(msg({{0, 1}, {0, 1}, Variant::mt2}).find("l - 1") != std::string::npos);
  CHECK(msg({{0, 1}, {2}, Variant::mt2}).find("0 or 1") != std::string::npos);
  CHECK_THROWS_AS(ncd::build({{0, 1, 2}, {0, 0}, Variant::mt3}), ncd::InputError);
}

TEST_CASE("MT2 l=2 rectangle and strip") {
  auto A = ncd::build({{0, 1}, {0}, Variant::mt2});
  CHECK(A.n() == 2);
  CHECK(polys(A) == std::vector<Polynomial>{P("x1", 2), P("x2", 2), P("1 - x1", 2), P("1 - x2", 2)});

  auto S = ncd::build({{0, 1}, {1}, Variant::mt2});
  CHECK(polys(S) == std::vector<Polynomial>{P("x1", 2), P("x2", 2), P("1 - x1", 2)});
}

TEST_CASE("MT2 l=3 subcases") {
  auto plus = ncd::build({{0, 1, 2}, {1, 0}, Variant::mt2});
  auto ref = ncd::region_R(ncd::RegionKind::plus, {0, 1, 2}, 1, 1);
  REQUIRE(plus.size() == ref.size());
  for (std::size_t j = 0; j < ref.size(); ++j) CHECK(plus.primitive(j).f() == ref[j].f());

  auto minus = ncd::build({{0, 1, 2}, {0, 1}, Variant::mt2});
  auto ref2 = ncd::region_R(ncd::RegionKind::minus, {0, 1, 2}, 1, 1);
  REQUIRE(minus.size() == ref2.size());
  for (std::size_t j = 0; j < ref2.size(); ++j) CHECK(minus.primitive(j).f() == ref2[j].f());

  for (auto labels : {std::vector<int>{0, 0}, std::vector<int>{1, 1}}) {
    auto A = ncd::build({{0, 1, 2}, labels, Variant::mt2});
    CHECK(A.n() == 2);
    CHECK(A.seed_is_interior());
  }
}

TEST_CASE("MT2 l=4 all bounded: rectangle, strip and one hole") {
  auto A = ncd::build({{0, 1, 2, 3}, {0, 0, 0}, Variant::mt2});
  CHECK(A.n() == 3);
  auto f = polys(A);
  for (const char* s : {"x1", "x2", "3 - x1", "1 - x2", "x3 + 1", "1 - x3"}) {
    CHECK(std::find(f.begin(), f.end(), P(s, 3)) != f.end());
  }
  std::size_t holes = 0;
  for (const auto& p : A.primitives()) {
    if (p.kind() != ncd::PrimitiveKind::ellipsoid_hole) continue;
    ++holes;
    const auto& e = std::get<ncd::EllipsoidData>(p.data());
    CHECK(e.center == RationalVector{Rational(3, 2), Rational(1, 2), 0});
    CHECK(e.squared_semi_axes[0] == Rational(1, 4));
    // Minor semi-axis within a quarter of the smaller clearance (1/2 in x2, 1 in x3).
    for (std::size_t k = 1; k < 3; ++k) CHECK(e.squared_semi_axes[k] <= Rational(1, 64));
  }
  CHECK(holes == 1);
  auto poles = ncd::hole_poles(A);
  std::set<Rational> xs;
  for (const auto& p : poles) xs.insert(p[0]);
  CHECK(xs == std::set<Rational>{1, 2});
}

TEST_CASE("MT3 l=2") {
  auto disk = ncd::build({{-1, 1}, {0}, Variant::mt3});
  REQUIRE(disk.size() == 1);
  CHECK(disk.primitive(0).f() == P("1 - x1^2 - x2^2", 2));

  // Label 1: the slab -1 <= x1 <= 1, unbounded in x2.
  auto slab = ncd::build({{-1, 1}, {1}, Variant::mt3});
  CHECK(slab.n() == 2);
  CHECK(slab.seed_is_interior());
  for (const auto& p : slab.primitives()) CHECK(p.f().support() == std::vector<std::size_t>{0});
}

TEST_CASE("choose_hole_geometry on the l=4 example") {
  ncd::Arrangement A = ncd::build({{0, 1, 2, 3}, {0, 0, 0}, Variant::mt2});
  std::vector<ncd::Primitive> fixed;
  for (const auto& p : A.primitives()) {
    if (p.kind() != ncd::PrimitiveKind::ellipsoid_hole) fixed.push_back(p);
  }
  ncd::HoleRequest req{1, 2, {0, Rational(1, 2), 0}};
  auto g = ncd::choose_hole_geometry(fixed, {}, 3, req, Rational(1, 4));
  CHECK(g.center == RationalVector{Rational(3, 2), Rational(1, 2), 0});
  CHECK(g.squared_semi_axes[0] == Rational(1, 4));
  // Margin oracle: along the pole segment the nearest fixed boundary is x2 = 0 or 1.
  CHECK(g.margin == doctest::Approx(0.5).epsilon(0.05));
  CHECK(g.squared_semi_axes[1] <= Rational(1, 4) * Rational(1, 4) * Rational(1, 4));
}

TEST_CASE("two holes are disjoint as closed sets") {
  auto A = ncd::build({{0, 1, 2, 3, 4}, {0, 0, 0, 0}, Variant::mt2});
  std::vector<ncd::EllipsoidData> holes;
  for (const auto& p : A.primitives()) {
    if (p.kind() == ncd::PrimitiveKind::ellipsoid_hole) holes.push_back(std::get<ncd::EllipsoidData>(p.data()));
  }
  REQUIRE(holes.size() == 2);
  // Exact separation: some coordinate k >= 1 has |c_a - c_b| > sqrt(r_a) + sqrt(r_b).
  bool separated = false;
  for (std::size_t k = 1; k < A.n(); ++k) {
    Rational d = holes[0].center[k] - holes[1].center[k];
    Rational sa = ncd::sqrt_upper_bound(holes[0].squared_semi_axes[k]);
    Rational sb = ncd::sqrt_upper_bound(holes[1].squared_semi_axes[k]);
    if (d * d > (sa + sb) * (sa + sb)) separated = true;
  }
  CHECK(separated);
}

TEST_CASE("predicted_profile") {
  auto p = ncd::predicted_profile({{0, 1, 2, 3}, {0, 1, 0}, Variant::mt2});
  REQUIRE(p.intervals.size() == 3);
  CHECK(p.intervals[0].bounded);
  CHECK_FALSE(p.intervals[1].bounded);
  CHECK(p.intervals[2].bounded);
  CHECK(p.singular_values == RationalVector{0, 1, 2, 3});
  CHECK(p.image_lo == 0);
  CHECK(p.image_hi == 3);

  auto all0 = ncd::predicted_profile({{0, 1, 2, 3, 4}, {0, 0, 0, 0}, Variant::mt2});
  for (const auto& iv : all0.intervals) CHECK(iv.bounded);

  auto one = ncd::predicted_profile({{0, 1}, {1}, Variant::mt2});
  REQUIRE(one.intervals.size() == 1);
  CHECK_FALSE(one.intervals[0].bounded);
}

TEST_CASE("property: constructed instances are well formed") {
  ncd::Rng rng(21);
  for (int it = 0; it < 60; ++it) {
    const Variant v = it % 2 ? Variant::mt3 : Variant::mt2;
    auto in = random_input(rng, v);
    CAPTURE(it);
    auto A = ncd::build(in);
    CHECK(A.seed_is_interior());
    REQUIRE(A.expected());
    CHECK(A.expected()->intervals.size() == in.labels.size());
    const std::size_t l = in.t.size();
    if (v == Variant::mt2 && l >= 4) {
      std::size_t unbounded = std::count(in.labels.begin(), in.labels.end(), 1);
      CHECK(A.n() == unbounded + 3);
    }
    for (const auto& p : A.primitives()) {
      CHECK(p.metadata_consistent());
      CHECK(p.f().eval(p.witness()) > 0);
    }
    // Every hole spans consecutive t values exactly in x1.
    std::set<Rational> ts(in.t.begin(), in.t.end());
    for (const auto& p : A.primitives()) {
      if (p.kind() != ncd::PrimitiveKind::ellipsoid_hole) continue;
      const auto& e = std::get<ncd::EllipsoidData>(p.data());
      Rational half;
      REQUIRE(ncd::exact_sqrt(e.squared_semi_axes[0], half));
      Rational lo = e.center[0] - half, hi = e.center[0] + half;
      REQUIRE(ts.count(lo) == 1);
      auto next = std::next(ts.find(lo));
      REQUIRE(next != ts.end());
      CHECK(*next == hi);
    }
    // Deterministic: a second build is identical.
    auto B = ncd::build(in);
    CHECK(polys(A) == polys(B));
    CHECK(A.seed_point() == B.seed_point());
  }
}
