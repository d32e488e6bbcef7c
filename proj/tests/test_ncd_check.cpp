#include "doctest.h"

#include "ncd/construct.hpp"
#include "ncd/ncd_check.hpp"

using ncd::Arrangement;
using ncd::Rational;
using ncd::RationalVector;
using ncd::Variant;

namespace {

const ncd::ConditionVerdict& get(const ncd::NcdReport& r, const char* id) {
  const auto* c = r.find(id);
  REQUIRE(c != nullptr);
  return *c;
}

}  // namespace

TEST_CASE("constructed instances pass every condition") {
  std::vector<ncd::ConstructionInput> inputs = {
      {{0, 1}, {0}, Variant::mt2},
      {{0, 1, 2}, {1, 0}, Variant::mt2},
      {{0, 1, 2, 3}, {0, 1, 0}, Variant::mt2},
      {{-1, 1}, {0}, Variant::mt3},
      {{0, 1, 2, 3}, {1, 0, 1}, Variant::mt3},
      // Uneven spacing.
      {{Rational(-1, 2), 1, Rational(3, 2), 3}, {0, 0, 1}, Variant::mt2},
      {{0, Rational(1, 2), 2, Rational(5, 2), 4}, {1, 0, 0, 1}, Variant::mt2},
  };
  for (const auto& in : inputs) {
    auto A = ncd::build(in);
    auto r = ncd::check_ncd(A, ncd::NcdBudget{}, 42);
    for (const auto& c : r.conditions) {
      CAPTURE(c.id);
      CAPTURE(c.detail);
      CHECK(c.passed);
      CHECK(c.counterexamples.empty());
    }
    CHECK(r.passed);
    for (const char* id :
         {"seed_interior", "closure", "off_component", "transversality", "connectivity", "hole_disjointness"}) {
      CHECK(r.find(id) != nullptr);
    }
  }
}

TEST_CASE("tangent circles fail transversality at (1, 0)") {
  Arrangement A = Arrangement::unchecked(
      2, {ncd::ellipsoid({0, 0}, {1, 1}, false), ncd::ellipsoid({2, 0}, {1, 1}, false)}, {1, 0});
  auto r = ncd::check_ncd(A, ncd::NcdBudget{}, 42);
  CHECK_FALSE(r.passed);
  const auto& t = get(r, "transversality");
  CHECK_FALSE(t.passed);
  REQUIRE_FALSE(t.counterexamples.empty());
  CHECK(t.counterexamples[0][0] == doctest::Approx(1.0));
  CHECK(t.counterexamples[0][1] == doctest::Approx(0.0));
}

TEST_CASE("a hyperbola branch dangling into the closure fails the off-component condition") {
  auto flat = ncd::region_R(ncd::RegionKind::flat, {0, 1}, 0, 1);
  Arrangement A(2, {flat[1], flat[2]}, {Rational(1, 2), Rational(1, 2)});
  auto r = ncd::check_ncd(A, ncd::NcdBudget{}, 42);
  const auto& c = get(r, "off_component");
  CHECK_FALSE(c.passed);
  REQUIRE_FALSE(c.counterexamples.empty());
  CHECK(c.counterexamples[0][1] < 0.0);
}

TEST_CASE("a hole touching the strip boundary fails disjointness") {
  auto A = ncd::build({{0, 1, 2, 3}, {0, 0, 0}, Variant::mt2});
  std::size_t j = 0;
  while (A.primitive(j).kind() != ncd::PrimitiveKind::ellipsoid_hole) ++j;
  auto e = std::get<ncd::EllipsoidData>(A.primitive(j).data());
  e.squared_semi_axes[2] = 1;  // reaches x3 = +-1
  auto B = A.with_primitive(j, ncd::ellipsoid(e.center, e.squared_semi_axes, true));
  auto r = ncd::check_ncd(B, ncd::NcdBudget{}, 42);
  CHECK_FALSE(get(r, "hole_disjointness").passed);
  CHECK_FALSE(r.passed);
}

TEST_CASE("check_ncd is deterministic for a fixed seed") {
  auto A = ncd::build({{0, 1, 2, 3}, {1, 0, 1}, Variant::mt2});
  auto a = ncd::check_ncd(A, ncd::NcdBudget{}, 7);
  auto b = ncd::check_ncd(A, ncd::NcdBudget{}, 7);
  REQUIRE(a.conditions.size() == b.conditions.size());
  for (std::size_t i = 0; i < a.conditions.size(); ++i) {
    CHECK(a.conditions[i].detail == b.conditions[i].detail);
    CHECK(a.conditions[i].checked == b.conditions[i].checked);
  }
  CHECK(a.boundary_points.size() == b.boundary_points.size());
  CHECK(a.interior_points == b.interior_points);
}

TEST_CASE("plane grid components") {
  auto A = ncd::build({{0, 1}, {0}, Variant::mt2});
  auto w = ncd::default_window(A, 2.0, 1.0);
  auto g = ncd::plane_grid(A, 1, A.seed_double(), w, 0.05);
  CHECK(ncd::strict_components(g) == 1);

  // x1^2 > 1/4 splits the plane in two.
  auto split = Arrangement::unchecked(
      2, {ncd::generic_primitive(ncd::Polynomial::parse("x1^2 - 1/4", 2), {1, 0})}, {1, 0});
  auto g2 = ncd::plane_grid(split, 1, {1.0, 0.0}, ncd::default_window(split, 2.0, 1.0), 0.05);
  CHECK(ncd::strict_components(g2) == 2);
}

TEST_CASE("disconnected interior fails connectivity") {
  auto split = Arrangement::unchecked(
      2,
      {ncd::generic_primitive(ncd::Polynomial::parse("x1^2 - 1/4", 2), {1, 0}),
       ncd::ellipsoid({0, 0}, {4, 4}, false)},
      {1, 0});
  auto r = ncd::check_ncd(split, ncd::NcdBudget{}, 42);
  CHECK_FALSE(get(r, "connectivity").passed);
}
