#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncd/arrangement.hpp"

namespace ncd {

struct Viewport {
  double u_lo, u_hi, v_lo, v_hi;
};

struct PlotConfig {
  std::size_t axis_u = 0;  // horizontal coordinate (0-based)
  std::size_t axis_v = 1;
  /// Values of the coordinates off the plane; defaults to the seed point.
  std::optional<std::vector<double>> base;
  std::optional<Viewport> viewport;
  double grid_step = 0.02;
  int width_px = 640;
};

struct Segment {
  double u0, v0, u1, v1;
};

/// Plane section through `base`: coordinate axis_u = u, axis_v = v.
struct PlaneSection {
  std::size_t axis_u, axis_v;
  std::vector<double> base;
  std::vector<double> point(double u, double v) const;
};

/// Zero curve of p on the section by marching squares over a node grid of the
/// given step. Saddle cells are split by the sign of the cell-center average.
std::vector<Segment> contour_segments(const CompiledPolynomial& p, const PlaneSection& plane, const Viewport& view,
                                      double step);

PlaneSection plot_plane(const Arrangement& A, const PlotConfig& cfg);
Viewport plot_viewport(const Arrangement& A, const PlotConfig& cfg);

/// SVG picture of the arrangement on a coordinate 2-plane. Throws InputError on
/// a degenerate plane selection.
std::string render_svg(const Arrangement& A, const PlotConfig& cfg);

}  // namespace ncd
