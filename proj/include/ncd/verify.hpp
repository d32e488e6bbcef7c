#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncd/lift.hpp"
#include "ncd/ncd_check.hpp"
#include "ncd/slice.hpp"

namespace ncd {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct CheckRecord {
  std::string id;
  Verdict verdict = Verdict::pass;
  std::string tolerance;
  std::string detail;
  std::size_t samples = 0;
  std::vector<std::vector<double>> witnesses;
  std::vector<std::vector<double>> counterexamples;
  double wall_ms = 0.0;
};

/// A critical value of f = x1 on M with the base point certifying it.
struct SingularValue {
  double value = 0.0;
  std::optional<Rational> exact;  // set when some witness was verified in exact arithmetic
  std::vector<double> witness;    // base point in the closure
  std::vector<std::size_t> active;
  std::string source;  // "pole", "face", "stratum"
};

struct SingularSearch {
  std::vector<SingularValue> values;  // clustered, sorted by value
  std::size_t strata_points = 0;      // boundary / intersection points examined
  std::size_t exact_candidates = 0;
};

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 2000;          // manifold points for the rank and image checks
  std::size_t boundary_samples = 400;  // strata samples for singular values
  std::size_t slices_per_interval = 5;
  NcdBudget ncd;
  SliceConfig slice;
  bool include_timings = false;
};

struct VerificationReport {
  std::string instance;
  std::uint64_t seed = 0;
  std::size_t m = 0, n = 0, l = 0;
  std::vector<CheckRecord> checks;
  std::vector<SingularValue> singular_values;
  std::vector<SliceClass> slices;
  bool passed = true;
  bool include_timings = false;

  const CheckRecord* find(const std::string& id) const;
};

/// Base points deliberately placed on the boundary strata: points on each S_j,
/// located intersections in the closure, and hole poles (exact).
struct StressedPoints {
  std::vector<std::vector<double>> points;
  std::vector<RationalVector> exact;
};

StressedPoints stressed_base_points(const Arrangement& A, std::uint64_t seed, const Window& w,
                                    const IntersectionConfig& cfg);

/// Jacobian rank l at sampled manifold points plus the lifts of the stressed base points.
CheckRecord verify_nonsingular(const LiftedManifold& L, std::size_t samples, std::uint64_t seed,
                               const StressedPoints& stressed);
CheckRecord verify_nonsingular(const LiftedManifold& L, std::size_t samples, std::uint64_t seed);

SingularSearch detect_singular_values(const LiftedManifold& L, std::size_t budget, std::uint64_t seed);

/// Compares detected values with the expected set at tolerance 1e-6.
CheckRecord compare_singular_values(const SingularSearch& found, const RationalVector& expected);

CheckRecord verify_image_interval(const LiftedManifold& L, std::size_t samples, std::uint64_t seed);

/// Slice boundedness against the labels of an expected profile.
CheckRecord verify_slices(const Arrangement& A, const Profile& expected, const VerifyConfig& cfg,
                          std::vector<SliceClass>* out = nullptr);

CheckRecord verify_fibers(const LiftedManifold& L, std::size_t samples, std::uint64_t seed);

VerificationReport run_suite(const LiftedManifold& L, const VerifyConfig& cfg);

/// Hole poles a +- sqrt(r1) e1 of every ellipsoid hole with a rational root.
std::vector<RationalVector> hole_poles(const Arrangement& A);

}  // namespace ncd
