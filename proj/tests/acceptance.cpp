// Acceptance gate: runs the seven acceptance criteria and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ncd/construct.hpp"
#include "ncd/lift.hpp"
#include "ncd/ncd_check.hpp"
#include "ncd/plot.hpp"
#include "ncd/serialize.hpp"
#include "ncd/verify.hpp"

using namespace ncd;

namespace {

constexpr std::uint64_t kSeed = 42;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Instance {
  ConstructionInput input;
  std::string name;
};

std::vector<Instance> matrix() {
  std::vector<Instance> out;
  for (Variant v : {Variant::mt2, Variant::mt3}) {
    for (int l = 2; l <= 6; ++l) {
      if (v == Variant::mt3 && l == 3) continue;
      for (int mask = 0; mask < (1 << (l - 1)); ++mask) {
        Instance inst;
        inst.input.variant = v;
        for (int j = 0; j < l; ++j) inst.input.t.push_back(Rational(j));
        std::string labels;
        for (int j = 0; j < l - 1; ++j) {
          int bit = (mask >> (l - 2 - j)) & 1;
          inst.input.labels.push_back(bit);
          labels += static_cast<char>('0' + bit);
        }
        inst.name = to_string(v) + " l=" + std::to_string(l) + " labels=" + labels;
        out.push_back(std::move(inst));
      }
    }
  }
  return out;
}

struct Outputs {
  std::string report;
  std::string svg;
};

struct Tally {
  bool ok = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    ok = false;
    if (notes.size() < 12) notes.push_back(why);
  }
};

void print_result(int id, const std::string& title, const Tally& t, const std::string& summary) {
  for (const auto& n : t.notes) std::printf("    %s\n", n.c_str());
  std::printf("criterion %d %s: %s (%s)\n", id, t.ok ? "PASS" : "FAIL", title.c_str(), summary.c_str());
  std::fflush(stdout);
}

std::string first_counterexample(const CheckRecord& r) {
  if (r.counterexamples.empty()) return "no witness recorded";
  std::string s = "(";
  for (std::size_t i = 0; i < r.counterexamples[0].size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", r.counterexamples[0][i]);
    s += buf;
  }
  return s + ")";
}

Outputs run_pipeline(const Instance& inst, VerificationReport* keep) {
  auto A = std::make_shared<const Arrangement>(build(inst.input));
  LiftedManifold L(A, minimal_m(*A));
  VerifyConfig cfg;
  cfg.seed = kSeed;
  VerificationReport rep = run_suite(L, cfg);
  Outputs out{dump(to_json(rep)), render_svg(*A, PlotConfig{})};
  if (keep) *keep = std::move(rep);
  return out;
}

// Replaces the first hole by one whose cross-section axes reach past the strip.
Arrangement inflate_first_hole(const Arrangement& A) {
  for (std::size_t j = 0; j < A.size(); ++j) {
    const Primitive& p = A.primitive(j);
    if (p.kind() != PrimitiveKind::ellipsoid_hole) continue;
    auto e = std::get<EllipsoidData>(p.data());
    for (std::size_t k = 1; k < e.squared_semi_axes.size(); ++k) e.squared_semi_axes[k] = 4;
    return A.with_primitive(j, ellipsoid(e.center, e.squared_semi_axes, true));
  }
  throw InputError("instance has no hole to inflate");
}

}  // namespace

int main() {
  const auto instances = matrix();
  std::printf("acceptance matrix: %zu instances, seed %llu\n", instances.size(),
              static_cast<unsigned long long>(kSeed));
  std::fflush(stdout);

  Tally c1, c2, c3, c4, c7;
  double c1_total = 0.0, c1_worst = 0.0, c2_worst = 0.0;
  std::size_t flagged = 0, c2_points = 0, negative_controls = 0;
  std::vector<Outputs> first_run;

  for (const auto& inst : instances) {
    // Criterion 1: construction and domain checks.
    auto start = std::chrono::steady_clock::now();
    Arrangement A = [&] {
      try {
        return build(inst.input);
      } catch (const std::exception& e) {
        c1.fail(inst.name + ": construct threw: " + e.what());
        throw;
      }
    }();
    NcdReport ncd = check_ncd(A, NcdBudget{}, kSeed);
    const double secs = seconds_since(start);
    c1_total += secs;
    c1_worst = std::max(c1_worst, secs);
    if (!ncd.passed) {
      for (const auto& c : ncd.conditions) {
        if (!c.passed) c1.fail(inst.name + ": " + c.id + ": " + c.detail);
      }
    }
    if (secs > 5.0) c1.fail(inst.name + ": construct + check took " + std::to_string(secs) + " s");

    VerificationReport rep;
    first_run.push_back(run_pipeline(inst, &rep));

    // Criterion 2: non-singularity of the lift.
    const CheckRecord* ns = rep.find("nonsingular");
    c2_points += ns->samples;
    c2_worst = std::max(c2_worst, ns->wall_ms / 1000.0);
    if (ns->verdict != Verdict::pass) c2.fail(inst.name + ": " + ns->detail + " at " + first_counterexample(*ns));
    if (ns->samples < 2000) c2.fail(inst.name + ": only " + std::to_string(ns->samples) + " points checked");
    if (ns->wall_ms > 10000.0) c2.fail(inst.name + ": rank check took " + std::to_string(ns->wall_ms) + " ms");

    // Criterion 3: image interval and singular values.
    const CheckRecord* img = rep.find("image_interval");
    const CheckRecord* sv = rep.find("singular_values");
    if (img->verdict != Verdict::pass) c3.fail(inst.name + ": image: " + img->detail);
    if (sv->verdict == Verdict::fail) {
      c3.fail(inst.name + ": singular values: " + sv->detail);
    } else if (sv->verdict == Verdict::inconclusive) {
      // Allowed only for the l = 3 transition case, and only when reported.
      const bool transition = inst.input.t.size() == 3 && inst.input.variant == Variant::mt2 &&
                              (inst.input.labels[0] == 1 || inst.input.labels[1] == 1);
      if (transition && sv->detail.find("not found") != std::string::npos) {
        ++flagged;
        std::printf("    flagged %s: %s\n", inst.name.c_str(), sv->detail.c_str());
      } else {
        c3.fail(inst.name + ": singular values inconclusive: " + sv->detail);
      }
    }

    // Criterion 4: slices against labels, plus a permuted-label negative control.
    const CheckRecord* sl = rep.find("slices");
    if (!sl || sl->verdict != Verdict::pass) c4.fail(inst.name + ": " + (sl ? sl->detail : "slices not run"));
    std::vector<int> rotated(inst.input.labels.begin() + 1, inst.input.labels.end());
    rotated.push_back(inst.input.labels.front());
    if (rotated != inst.input.labels) {
      ConstructionInput permuted = inst.input;
      permuted.labels = rotated;
      VerifyConfig cfg;
      cfg.seed = kSeed;
      CheckRecord neg = verify_slices(A, predicted_profile(permuted), cfg);
      ++negative_controls;
      if (neg.verdict != Verdict::fail || neg.counterexamples.empty()) {
        c4.fail(inst.name + ": permuted labels not detected");
      }
    }
  }

  print_result(1, "construction matrix passes the domain checks", c1,
               std::to_string(instances.size()) + " instances, worst " + std::to_string(c1_worst) + " s, total " +
                   std::to_string(c1_total) + " s");
  print_result(2, "lifted manifolds are non-singular", c2,
               std::to_string(c2_points) + " points, worst " + std::to_string(c2_worst) + " s per instance");
  print_result(3, "image interval and singular values", c3,
               std::to_string(flagged) + " instances flagged with unfound transition witnesses");
  print_result(4, "slice boundedness matches labels", c4,
               std::to_string(negative_controls) + " permuted-label controls detected");

  // Criterion 5: the unit 3-sphere.
  Tally c5;
  {
    ConstructionInput in{{Rational(-1), Rational(1)}, {0}, Variant::mt3};
    auto A = std::make_shared<const Arrangement>(build(in));
    LiftedManifold L(A, 3);
    Polynomial sphere = Polynomial::parse("x1^2 + x2^2 + x3^2 + x4^2 - 1", 4);
    if (L.equations().size() != 1) {
      c5.fail("expected one equation, got " + std::to_string(L.equations().size()));
    } else if (!(L.equations()[0] == sphere) && !(L.equations()[0] == -sphere)) {
      c5.fail("equation is " + L.equations()[0].to_string());
    }
    SingularSearch found = detect_singular_values(L, 400, kSeed);
    std::vector<Rational> exact;
    for (const auto& v : found.values) {
      if (!v.exact) c5.fail("singular value " + std::to_string(v.value) + " lacks an exact witness");
      else exact.push_back(*v.exact);
    }
    if (exact != std::vector<Rational>{Rational(-1), Rational(1)}) c5.fail("singular values differ from {-1, 1}");
    Fiber f = fiber_at(L, std::vector<double>{0.0, 0.0});
    if (f.empty || f.dimension != 1 || f.factors.size() != 1 || f.factors[0].squared_radius != 1.0) {
      c5.fail("fiber over the origin is not a circle of squared radius 1");
    }
  }
  print_result(5, "exact 3-sphere instance", c5, "equation, singular values {-1, 1}, fiber S^1");

  // Criterion 6: adversarial arrangements.
  Tally c6;
  {
    Arrangement tangent = Arrangement::unchecked(
        2, {ellipsoid({Rational(0), Rational(0)}, {Rational(1), Rational(1)}, false),
            ellipsoid({Rational(2), Rational(0)}, {Rational(1), Rational(1)}, false)},
        RationalVector{Rational(1), Rational(0)});
    NcdReport r = check_ncd(tangent, NcdBudget{}, kSeed);
    const auto* tv = r.find("transversality");
    if (tv->passed || tv->counterexamples.empty()) {
      c6.fail("tangent circles passed transversality");
    } else {
      const auto& w = tv->counterexamples[0];
      if (std::abs(w[0] - 1.0) > 1e-6 || std::abs(w[1]) > 1e-6) c6.fail("tangency witness is not (1, 0)");
    }

    auto flat = region_R(RegionKind::flat, {Rational(0), Rational(1)}, Rational(1), Rational(1));
    Arrangement dangling(2, {flat[1], flat[2]}, {Rational(1, 2), Rational(1, 2)});
    NcdReport dr = check_ncd(dangling, NcdBudget{}, kSeed);
    const auto* off = dr.find("off_component");
    if (off->passed || off->counterexamples.empty()) {
      c6.fail("dangling branch passed the off-component condition");
    } else if (!(off->counterexamples[0][1] < 0.0)) {
      c6.fail("off-component witness does not lie on the far branch");
    }

    Arrangement base = build(ConstructionInput{{0, 1, 2, 3}, {0, 0, 0}, Variant::mt2});
    NcdReport hr = check_ncd(inflate_first_hole(base), NcdBudget{}, kSeed);
    const auto* hd = hr.find("hole_disjointness");
    if (hd->passed || hd->counterexamples.empty()) c6.fail("inflated hole passed disjointness");
  }
  print_result(6, "adversarial arrangements are rejected with witnesses", c6,
               "tangent circles, dangling branch, inflated hole");

  // Criterion 7: determinism of reports and pictures.
  std::size_t differing = 0;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Outputs again = run_pipeline(instances[i], nullptr);
    if (again.report != first_run[i].report) c7.fail(instances[i].name + ": report bytes differ"), ++differing;
    if (again.svg != first_run[i].svg) c7.fail(instances[i].name + ": SVG bytes differ"), ++differing;
  }
  print_result(7, "two seeded runs are byte-identical", c7,
               std::to_string(instances.size()) + " reports and SVGs compared, " + std::to_string(differing) +
                   " differences");

  const bool all = c1.ok && c2.ok && c3.ok && c4.ok && c5.ok && c6.ok && c7.ok;
  std::printf("acceptance %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
