#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ncd/arrangement.hpp"

namespace ncd {

struct IntersectionConfig {
  std::size_t starts = 10;          // multistart count per tuple
  std::size_t max_iterations = 80;  // damped Gauss-Newton steps per start
  double tolerance = 1e-11;         // max |f_j| at convergence
  std::size_t max_tuple = 3;
  long snap_denominator = 1000;     // rational snapping of converged points
  std::size_t points_per_tuple = 4;
};

struct LocatedPoint {
  std::vector<double> x;
  /// Exact point when snapping reproduced f_j = 0 and the component conditions exactly.
  std::optional<RationalVector> exact;
  bool in_closure = false;  // all f_k >= -1e-9
  TransversalityReport transversality;
};

/// Points found on the intersection of the selected components S_j, j in indices.
/// No points means "not found", which is not a proof of emptiness.
struct TupleResult {
  std::vector<std::size_t> indices;
  std::vector<LocatedPoint> points;
};

/// Damped Gauss-Newton on {f_j = 0 : j in indices}; the result still needs the component test.
std::optional<std::vector<double>> solve_zero_set(const Arrangement& A, const std::vector<std::size_t>& indices,
                                                  std::vector<double> start, const IntersectionConfig& cfg);

/// Rational rounding of x that satisfies f_j = 0 (j in indices) and the component conditions exactly.
std::optional<RationalVector> snap_exact(const Arrangement& A, const std::vector<std::size_t>& indices,
                                         const std::vector<double>& x, long max_den);

/// Pairwise, then triple (up to cfg.max_tuple) intersections of the components S_j.
/// Tuples are only grown from tuples whose sub-tuples were all found.
std::vector<TupleResult> locate_intersections(const Arrangement& A, const Window& w, const IntersectionConfig& cfg,
                                              std::uint64_t seed,
                                              const std::vector<std::vector<double>>& anchors);

}  // namespace ncd
