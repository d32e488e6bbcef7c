#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ncd/arrangement.hpp"
#include "ncd/intersect.hpp"

namespace ncd {

struct NcdBudget {
  double grid_step = 0.02;
  int closure_radius = 2;  // grid steps
  std::size_t interior_samples = 200;
  std::size_t boundary_samples = 200;
  std::size_t off_component_samples = 300;  // per primitive with extra components
  IntersectionConfig intersect;
  double window_half_width = 12.0;
  double window_pad = 5.0;
};

struct ConditionVerdict {
  std::string id;
  bool passed = true;
  std::string detail;
  std::size_t checked = 0;
  std::vector<std::vector<double>> counterexamples;
};

struct NcdReport {
  std::vector<ConditionVerdict> conditions;
  std::vector<TupleResult> intersections;
  /// Boundary samples and located points inside the closure, reused by later checks.
  std::vector<BoundaryPoint> boundary_points;
  std::vector<std::vector<double>> interior_points;
  bool passed = true;

  const ConditionVerdict* find(const std::string& id) const;
};

/// Checks for one arrangement:
///   seed_interior, closure (grid), off_component, transversality (located
///   intersections and boundary samples), connectivity (grid union-find), hole_disjointness.
NcdReport check_ncd(const Arrangement& A, const NcdBudget& budget, std::uint64_t seed);

/// A 2-D grid section {x : x_k free for k in {0, axis}, other coordinates = base}.
struct PlaneGrid {
  std::size_t axis = 1;
  std::vector<double> base;
  double u0 = 0, v0 = 0, step = 0.02;
  std::size_t cols = 0, rows = 0;
  std::vector<std::uint8_t> closed;  // all f_j >= -1e-9
  std::vector<std::uint8_t> strict;  // all f_j > 1e-9
  std::vector<double> point(std::size_t row, std::size_t col) const;
};

PlaneGrid plane_grid(const Arrangement& A, std::size_t axis, const std::vector<double>& base, const Window& w,
                     double step);

/// Number of 4-connected components of the strict cells.
std::size_t strict_components(const PlaneGrid& g);

}  // namespace ncd
