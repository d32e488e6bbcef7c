#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncd/arrangement.hpp"

namespace ncd {

enum class Boundedness { bounded, unbounded, empty };
std::string to_string(Boundedness b);

struct AnalyticSlice {
  Boundedness verdict = Boundedness::empty;
  /// False when some constraint is not of a kind the analytic rules cover.
  bool supported = true;
  std::string detail;
};

struct EmpiricalSlice {
  Boundedness verdict = Boundedness::empty;
  std::size_t components = 0;
  std::size_t grid_points = 0;
  std::size_t members = 0;
  std::vector<double> base_point;
  std::vector<double> escape_witness;  // set when unbounded
  double enclosing_radius = 0.0;       // set when bounded
};

/// D-bar intersected with {x1 = t}.
struct SliceClass {
  double t = 0.0;
  Boundedness boundedness = Boundedness::empty;
  AnalyticSlice analytic;
  EmpiricalSlice empirical;
  bool agree = true;
};

struct SliceConfig {
  double half_width = 12.0;
  double step = 0.01;
  std::size_t grid_budget = std::size_t{1} << 16;
  std::uint64_t seed = 7;
};

SliceClass classify_slice(const Arrangement& A, const Rational& t, const SliceConfig& cfg);

/// Per-kind bounds on every coordinate after fixing x1 = t.
AnalyticSlice classify_slice_analytic(const Arrangement& A, const Rational& t);

EmpiricalSlice classify_slice_empirical(const Arrangement& A, double t, const SliceConfig& cfg);

/// A point with x1 = t inside D (closed = false) or its closure (closed = true),
/// found by coordinate-wise chord search.
std::optional<std::vector<double>> find_slice_point(const Arrangement& A, double t, const Window& w, bool closed,
                                                    Rng& rng);

}  // namespace ncd
