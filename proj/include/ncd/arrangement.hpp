#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncd/linalg.hpp"
#include "ncd/primitive.hpp"
#include "ncd/random.hpp"

namespace ncd {

/// Expected behaviour of x1 on one interval (t_j, t_{j+1}).
struct IntervalExpectation {
  Rational lo, hi;
  int label = 0;
  bool bounded = true;
};

struct Profile {
  std::vector<IntervalExpectation> intervals;
  RationalVector singular_values;
  Rational image_lo, image_hi;
};

/// Where an arrangement came from. Empty variant for hand-built ones.
struct Provenance {
  std::string tag;
  std::string variant;  // "mt2", "mt3" or ""
  RationalVector t_values;
  std::vector<int> labels;
  Rational strip_half_width = 1;
  Rational hole_shrink = Rational(1, 4);
};

/// D = { f_j > 0 for all j } together with the data needed to check it.
class Arrangement {
 public:
  /// Validating constructor: dimensions agree and every f_j(seed) > 0.
  Arrangement(std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point, Provenance provenance = {},
              std::optional<Profile> expected = std::nullopt);

  /// Skips the seed check; for adversarial fixtures whose D may be empty.
  static Arrangement unchecked(std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point,
                               Provenance provenance = {});

  std::size_t n() const { return n_; }
  std::size_t size() const { return primitives_.size(); }
  const std::vector<Primitive>& primitives() const { return primitives_; }
  const Primitive& primitive(std::size_t j) const { return primitives_[j]; }
  const CompiledPolynomial& compiled(std::size_t j) const { return compiled_[j]; }
  const RationalVector& seed_point() const { return seed_; }
  std::vector<double> seed_double() const { return to_doubles(seed_); }
  const Provenance& provenance() const { return provenance_; }
  const std::optional<Profile>& expected() const { return expected_; }
  void set_expected(std::optional<Profile> p) { expected_ = std::move(p); }
  bool seed_is_interior() const;

  /// Image under T(x) = A x + b: every f_j becomes f_j o T^{-1}; primitives turn generic.
  Arrangement transformed(const RationalMatrix& A, const RationalVector& b) const;

  /// Copy with primitive j replaced (used to build mutated instances).
  Arrangement with_primitive(std::size_t j, Primitive p) const;

 private:
  struct NoCheck {};
  Arrangement(NoCheck, std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point,
              Provenance provenance, std::optional<Profile> expected);

  std::size_t n_;
  std::vector<Primitive> primitives_;
  std::vector<CompiledPolynomial> compiled_;
  RationalVector seed_;
  Provenance provenance_;
  std::optional<Profile> expected_;
};

enum class Location { interior, boundary, exterior };
std::string to_string(Location where);

struct Membership {
  Location where = Location::exterior;
  /// Indices with f_j = 0 (boundary) or within tolerance; empty otherwise.
  std::vector<std::size_t> active;
};

constexpr double kActivationTolerance = 1e-9;

Membership membership(const Arrangement& A, std::span<const Rational> x);
Membership membership(const Arrangement& A, std::span<const double> x, double tol = kActivationTolerance);

/// Indices j with |f_j(x)| <= tol (float) regardless of the other signs.
std::vector<std::size_t> near_zero(const Arrangement& A, std::span<const double> x, double tol);

struct TransversalityReport {
  std::vector<std::size_t> active;
  bool exact = false;
  std::size_t rank = 0;
  double ratio = 0.0;  // smallest / largest singular value (float path)
  bool zero_gradient = false;
  std::size_t zero_gradient_index = 0;
  bool passed = false;
};

constexpr double kRankTolerance = 1e-8;

TransversalityReport check_transversality_at(const Arrangement& A, std::span<const double> p,
                                             const std::vector<std::size_t>& active);
TransversalityReport check_transversality_at(const Arrangement& A, std::span<const Rational> p,
                                             const std::vector<std::size_t>& active);

/// Axis-aligned sampling window: x1 in [t1 - pad, tl + pad], others in [-W, W].
struct Window {
  std::vector<double> lo, hi;
  double half_width = 12.0;
};

Window default_window(const Arrangement& A, double half_width = 12.0, double pad = 5.0);

/// Sorted disjoint closed intervals of a line parameter.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<std::pair<double, double>> parts);
  static IntervalSet single(double lo, double hi) { return IntervalSet({{lo, hi}}); }

  const std::vector<std::pair<double, double>>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  double length() const;
  IntervalSet intersect(const IntervalSet& other) const;
  /// Part containing s, if any.
  std::optional<std::pair<double, double>> part_containing(double s) const;

 private:
  std::vector<std::pair<double, double>> parts_;
};

/// { s in [lo, hi] : q(s) > -slack } for q with coefficients c (lowest first, degree <= 2).
IntervalSet positive_set(const std::vector<double>& c, double lo, double hi, double slack = 0.0);

/// Parameters s for which x + s dir stays in D (all f_j > -slack) and inside the window.
IntervalSet feasible_chord(const Arrangement& A, std::span<const double> x, std::span<const double> dir,
                           const Window& w, double slack = 0.0);

struct SampleSet {
  std::vector<std::vector<double>> points;
  /// Requested minus produced; nonzero only when the sampler ran out of retries.
  std::size_t shortfall = 0;
};

/// Interior samples by hit-and-run from the seed point, using exact chords along random lines.
SampleSet sample_region(const Arrangement& A, std::size_t count, std::uint64_t seed, const Window& w);

struct BoundaryPoint {
  std::vector<double> x;
  std::vector<std::size_t> active;
};

struct BoundarySampleSet {
  std::vector<BoundaryPoint> points;
  std::size_t shortfall = 0;
};

/// Exits of random rays from interior samples, bisected until |f_j| < 1e-12 on the active constraint.
BoundarySampleSet sample_boundary(const Arrangement& A, std::size_t count, std::uint64_t seed, const Window& w);

}  // namespace ncd
