#include "ncd/plot.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "ncd/verify.hpp"

namespace ncd {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace

std::vector<double> PlaneSection::point(double u, double v) const {
  std::vector<double> x = base;
  x[axis_u] = u;
  x[axis_v] = v;
  return x;
}

std::vector<Segment> contour_segments(const CompiledPolynomial& p, const PlaneSection& plane, const Viewport& view,
                                      double step) {
  const auto cols = static_cast<std::size_t>(std::ceil((view.u_hi - view.u_lo) / step));
  const auto rows = static_cast<std::size_t>(std::ceil((view.v_hi - view.v_lo) / step));
  auto u_at = [&](std::size_t i) { return view.u_lo + static_cast<double>(i) * step; };
  auto v_at = [&](std::size_t k) { return view.v_lo + static_cast<double>(k) * step; };
  std::vector<double> value((cols + 1) * (rows + 1));
  for (std::size_t k = 0; k <= rows; ++k) {
    for (std::size_t i = 0; i <= cols; ++i) value[k * (cols + 1) + i] = p(plane.point(u_at(i), v_at(k)));
  }
  std::vector<Segment> out;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < cols; ++i) {
      // Corners counter-clockwise from bottom-left.
      const std::array<double, 4> f = {value[k * (cols + 1) + i], value[k * (cols + 1) + i + 1],
                                       value[(k + 1) * (cols + 1) + i + 1], value[(k + 1) * (cols + 1) + i]};
      const std::array<double, 4> cu = {u_at(i), u_at(i + 1), u_at(i + 1), u_at(i)};
      const std::array<double, 4> cv = {v_at(k), v_at(k), v_at(k + 1), v_at(k + 1)};
      int mask = 0;
      for (int c = 0; c < 4; ++c) mask |= (f[c] > 0.0 ? 1 : 0) << c;
      if (mask == 0 || mask == 15) continue;
      // Crossing on edge e joining corners e and e+1.
      auto cross = [&](int e) {
        int a = e, b = (e + 1) % 4;
        double s = f[a] / (f[a] - f[b]);
        return std::pair<double, double>{cu[a] + s * (cu[b] - cu[a]), cv[a] + s * (cv[b] - cv[a])};
      };
      std::vector<int> edges;
      for (int e = 0; e < 4; ++e) {
        if (((mask >> e) & 1) != ((mask >> ((e + 1) % 4)) & 1)) edges.push_back(e);
      }
      std::vector<std::pair<int, int>> pairs;
      if (edges.size() == 2) {
        pairs.push_back({edges[0], edges[1]});
      } else {
        // Saddle: positive corners 0,2 (mask 5) or 1,3 (mask 10).
        const bool center_positive = (f[0] + f[1] + f[2] + f[3]) > 0.0;
        const bool diag02 = mask == 5;
        if (diag02 == center_positive) {
          // Positive corners connected through the center: cut off the negative ones.
          pairs = {{0, 1}, {2, 3}};
          if (!diag02) pairs = {{3, 0}, {1, 2}};
        } else {
          pairs = {{3, 0}, {1, 2}};
          if (!diag02) pairs = {{0, 1}, {2, 3}};
        }
      }
      for (auto [ea, eb] : pairs) {
        auto a = cross(ea), b = cross(eb);
        out.push_back({a.first, a.second, b.first, b.second});
      }
    }
  }
  return out;
}

PlaneSection plot_plane(const Arrangement& A, const PlotConfig& cfg) {
  const std::size_t n = A.n();
  if (n < 2) throw InputError("plotting needs n >= 2");
  if (cfg.axis_u >= n || cfg.axis_v >= n) {
    throw InputError("plot axes must lie in x1..x" + std::to_string(n));
  }
  if (cfg.axis_u == cfg.axis_v) throw InputError("plot axes must be two different coordinates");
  PlaneSection plane{cfg.axis_u, cfg.axis_v, cfg.base ? *cfg.base : A.seed_double()};
  if (plane.base.size() != n) throw InputError("plot base point needs " + std::to_string(n) + " coordinates");
  return plane;
}

Viewport plot_viewport(const Arrangement& A, const PlotConfig& cfg) {
  if (cfg.viewport) {
    const Viewport& v = *cfg.viewport;
    if (!(v.u_lo < v.u_hi && v.v_lo < v.v_hi)) throw InputError("viewport must have positive extent");
    return v;
  }
  const auto seed = A.seed_double();
  Viewport v{seed[cfg.axis_u] - 3, seed[cfg.axis_u] + 3, seed[cfg.axis_v] - 3, seed[cfg.axis_v] + 3};
  const auto& t = A.provenance().t_values;
  if (cfg.axis_u == 0 && !t.empty()) {
    v.u_lo = std::floor(to_double(t.front())) - 1;
    v.u_hi = std::ceil(to_double(t.back())) + 1;
  }
  return v;
}

std::string render_svg(const Arrangement& A, const PlotConfig& cfg) {
  if (!(cfg.grid_step > 0)) throw InputError("grid step must be positive");
  const PlaneSection plane = plot_plane(A, cfg);
  const Viewport view = plot_viewport(A, cfg);
  const double margin = 40.0;
  const double scale = (cfg.width_px - 2 * margin) / (view.u_hi - view.u_lo);
  const double width = cfg.width_px;
  const double height = std::round((view.v_hi - view.v_lo) * scale + 2 * margin);
  auto X = [&](double u) { return num(margin + (u - view.u_lo) * scale); };
  auto Y = [&](double v) { return num(height - margin - (v - view.v_lo) * scale); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"white\"/>\n";

  // Shaded region: runs of cells whose centers lie in D, one row at a time.
  const double h = cfg.grid_step;
  const auto cols = static_cast<std::size_t>(std::ceil((view.u_hi - view.u_lo) / h));
  const auto rows = static_cast<std::size_t>(std::ceil((view.v_hi - view.v_lo) / h));
  svg += "<g fill=\"#c6dbef\" stroke=\"none\">\n";
  for (std::size_t k = 0; k < rows; ++k) {
    const double v = view.v_lo + (static_cast<double>(k) + 0.5) * h;
    std::size_t i = 0;
    while (i < cols) {
      auto inside = [&](std::size_t c) {
        auto x = plane.point(view.u_lo + (static_cast<double>(c) + 0.5) * h, v);
        for (std::size_t j = 0; j < A.size(); ++j) {
          if (!(A.compiled(j)(x) > 0.0)) return false;
        }
        return true;
      };
      if (!inside(i)) {
        ++i;
        continue;
      }
      std::size_t end = i;
      while (end < cols && inside(end)) ++end;
      const double u0 = view.u_lo + static_cast<double>(i) * h, u1 = view.u_lo + static_cast<double>(end) * h;
      const double v0 = view.v_lo + static_cast<double>(k) * h;
      svg += "<rect x=\"" + X(u0) + "\" y=\"" + Y(v0 + h) + "\" width=\"" + num((u1 - u0) * scale) + "\" height=\"" +
             num(h * scale) + "\"/>\n";
      i = end;
    }
  }
  svg += "</g>\n";

  for (std::size_t j = 0; j < A.size(); ++j) {
    auto segs = contour_segments(A.compiled(j), plane, view, h);
    if (segs.empty()) continue;
    std::string d;
    for (const auto& s : segs) d += "M" + X(s.u0) + " " + Y(s.v0) + "L" + X(s.u1) + " " + Y(s.v1);
    svg += "<path id=\"f" + std::to_string(j + 1) + "\" fill=\"none\" stroke=\"" + kPalette[j % kPalette.size()] +
           "\" stroke-width=\"1.5\" d=\"" + d + "\"/>\n";
  }

  // Frame and axis labels.
  svg += "<rect x=\"" + num(margin) + "\" y=\"" + num(margin) + "\" width=\"" + num(width - 2 * margin) +
         "\" height=\"" + num(height - 2 * margin) + "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + num(width - margin) + "\" y=\"" + num(height - 8) + "\" font-size=\"12\">x" +
         std::to_string(cfg.axis_u + 1) + "</text>\n";
  svg += "<text x=\"6\" y=\"" + num(margin - 8) + "\" font-size=\"12\">x" + std::to_string(cfg.axis_v + 1) +
         "</text>\n";

  if (cfg.axis_u == 0) {
    for (const auto& t : A.provenance().t_values) {
      const double u = to_double(t);
      if (u < view.u_lo || u > view.u_hi) continue;
      svg += "<line class=\"tick\" x1=\"" + X(u) + "\" y1=\"" + num(height - margin) + "\" x2=\"" + X(u) +
             "\" y2=\"" + num(height - margin + 6) + "\" stroke=\"black\"/>\n";
      svg += "<text x=\"" + X(u) + "\" y=\"" + num(height - margin + 18) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + to_string(t) + "</text>\n";
    }
  }
  for (const auto& pole : hole_poles(A)) {
    const double u = to_double(pole[cfg.axis_u]), v = to_double(pole[cfg.axis_v]);
    if (u < view.u_lo || u > view.u_hi || v < view.v_lo || v > view.v_hi) continue;
    svg += "<circle class=\"pole\" cx=\"" + X(u) + "\" cy=\"" + Y(v) + "\" r=\"3\" fill=\"black\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace ncd
