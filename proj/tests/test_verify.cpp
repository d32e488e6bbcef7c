#include "doctest.h"

#include <memory>

#include "ncd/construct.hpp"
#include "ncd/verify.hpp"

using ncd::Rational;
using ncd::RationalVector;
using ncd::Variant;
using ncd::Verdict;

namespace {

ncd::LiftedManifold lifted(const ncd::ConstructionInput& in, std::size_t extra = 0) {
  auto A = std::make_shared<const ncd::Arrangement>(ncd::build(in));
  return ncd::lift(A, ncd::minimal_m(*A) + extra);
}

std::vector<double> values(const ncd::SingularSearch& s) {
  std::vector<double> out;
  for (const auto& v : s.values) out.push_back(v.value);
  return out;
}

}  // namespace

TEST_CASE("3-sphere: singular values, rank and image") {
  auto L = lifted({{-1, 1}, {0}, Variant::mt3});
  auto found = ncd::detect_singular_values(L, 200, 42);
  REQUIRE(found.values.size() == 2);
  REQUIRE(found.values[0].exact);
  REQUIRE(found.values[1].exact);
  CHECK(*found.values[0].exact == -1);
  CHECK(*found.values[1].exact == 1);
  CHECK(ncd::compare_singular_values(found, {-1, 1}).verdict == Verdict::pass);

  CHECK(ncd::verify_nonsingular(L, 500, 1).verdict == Verdict::pass);
  auto image = ncd::verify_image_interval(L, 2000, 2);
  CHECK(image.verdict == Verdict::pass);

  RationalVector north{1, 0, 0, 0};
  auto J = L.jacobian(std::span<const Rational>(north));
  CHECK(J == ncd::RationalMatrix{{-2, 0, 0, 0}});
  CHECK(ncd::exact_rank(J) == 1);
}

TEST_CASE("rectangle: corner rank and singular values {0, 1}") {
  auto L = lifted({{0, 1}, {0}, Variant::mt2});
  RationalVector corner{0, 0};
  auto q = ncd::lift_point_exact(L, corner);
  REQUIRE(q);
  auto J = L.jacobian(std::span<const Rational>(*q));
  CHECK(J.size() == 4);
  CHECK(J[0].size() == 10);
  CHECK(ncd::exact_rank(J) == 4);

  auto found = ncd::detect_singular_values(L, 200, 42);
  auto v = values(found);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == doctest::Approx(0.0));
  CHECK(v[1] == doctest::Approx(1.0));
  // Top and bottom faces alone contribute nothing: e1 is not in span{e2}.
  CHECK_FALSE(ncd::exact_in_row_span({{0, 1}}, {1, 0}));
}

TEST_CASE("all-bounded l=4 instance: faces and hole poles") {
  auto L = lifted({{0, 1, 2, 3}, {0, 0, 0}, Variant::mt2});
  auto found = ncd::detect_singular_values(L, 400, 42);
  auto cmp = ncd::compare_singular_values(found, {0, 1, 2, 3});
  CAPTURE(cmp.detail);
  CHECK(cmp.verdict == Verdict::pass);
  // The interior values sit at the hole poles (x1, 1/2, 0).
  std::size_t at_poles = 0;
  for (const auto& s : found.values) {
    if (s.value < 0.5 || s.value > 2.5) continue;
    REQUIRE(s.exact);
    CHECK((*s.exact == 1 || *s.exact == 2));
    CHECK(s.witness[1] == doctest::Approx(0.5));
    CHECK(s.witness[2] == doctest::Approx(0.0));
    ++at_poles;
  }
  CHECK(at_poles == 2);
}

TEST_CASE("compare_singular_values: extra values fail, missing values are inconclusive") {
  ncd::SingularSearch s;
  s.values = {{0.0}, {1.0}};
  CHECK(ncd::compare_singular_values(s, {0, 1}).verdict == Verdict::pass);
  CHECK(ncd::compare_singular_values(s, {0}).verdict == Verdict::fail);
  CHECK(ncd::compare_singular_values(s, {0, 1, 2}).verdict == Verdict::inconclusive);
  s.values = {{1e-8}, {1.0}};
  CHECK(ncd::compare_singular_values(s, {0, 1}).verdict == Verdict::pass);
}

TEST_CASE("slices checked against permuted labels report a mismatch") {
  ncd::ConstructionInput in{{0, 1, 2, 3}, {0, 1, 0}, Variant::mt2};
  auto A = ncd::build(in);
  ncd::VerifyConfig cfg;
  CHECK(ncd::verify_slices(A, ncd::predicted_profile(in), cfg).verdict == Verdict::pass);
  ncd::ConstructionInput wrong{{0, 1, 2, 3}, {1, 0, 0}, Variant::mt2};
  auto r = ncd::verify_slices(A, ncd::predicted_profile(wrong), cfg);
  CHECK(r.verdict == Verdict::fail);
  CHECK_FALSE(r.counterexamples.empty());
}

TEST_CASE("tangent circles: rank deficiency at the tangency") {
  auto A = std::make_shared<const ncd::Arrangement>(ncd::Arrangement::unchecked(
      2, {ncd::ellipsoid({0, 0}, {1, 1}, false), ncd::ellipsoid({2, 0}, {1, 1}, false)}, {1, 0}));
  auto L = ncd::lift(A, 4);
  RationalVector touch{1, 0};
  auto q = ncd::lift_point_exact(L, touch);
  REQUIRE(q);
  CHECK(ncd::exact_rank(L.jacobian(std::span<const Rational>(*q))) == 1);

  ncd::StressedPoints stressed;
  stressed.points = {{1.0, 0.0}};
  stressed.exact = {touch};
  auto r = ncd::verify_nonsingular(L, 10, 3, stressed);
  CHECK(r.verdict == Verdict::fail);
  REQUIRE_FALSE(r.counterexamples.empty());
  CHECK(r.counterexamples[0][0] == doctest::Approx(1.0));
}

TEST_CASE("strip image fills [t1, t2] though M is not compact") {
  auto L = lifted({{0, 1}, {1}, Variant::mt2});
  auto r = ncd::verify_image_interval(L, 2000, 5);
  CAPTURE(r.detail);
  CHECK(r.verdict == Verdict::pass);
}

TEST_CASE("run_suite passes on constructed instances and is deterministic") {
  for (auto in : {ncd::ConstructionInput{{0, 1}, {0}, Variant::mt2},
                  ncd::ConstructionInput{{0, 1, 2, 3}, {1, 0, 1}, Variant::mt2}}) {
    auto L = lifted(in, 1);
    ncd::VerifyConfig cfg;
    cfg.samples = 500;
    cfg.boundary_samples = 200;
    auto a = ncd::run_suite(L, cfg);
    for (const auto& c : a.checks) {
      CAPTURE(c.id);
      CAPTURE(c.detail);
      CHECK(c.verdict == Verdict::pass);
      CHECK(c.counterexamples.empty());
    }
    CHECK(a.passed);
    CHECK(a.find("nonsingular") != nullptr);
    CHECK(a.find("slices") != nullptr);
    auto b = ncd::run_suite(L, cfg);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
      CHECK(a.checks[i].detail == b.checks[i].detail);
      CHECK(a.checks[i].witnesses == b.checks[i].witnesses);
    }
  }
}

TEST_CASE("hole poles are exact") {
  auto A = ncd::build({{0, 1, 2, 3, 4}, {0, 0, 0, 0}, Variant::mt2});
  auto poles = ncd::hole_poles(A);
  REQUIRE(poles.size() == 4);
  for (const auto& p : poles) {
    auto m = ncd::membership(A, p);
    CHECK(m.where == ncd::Location::boundary);
  }
}
