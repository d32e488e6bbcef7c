#include "ncd/ncd_check.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncd/union_find.hpp"

namespace ncd {

namespace {

constexpr std::size_t kMaxCounterexamples = 5;

void record(ConditionVerdict& v, const std::vector<double>& x) {
  v.passed = false;
  if (v.counterexamples.size() < kMaxCounterexamples) v.counterexamples.push_back(x);
}

std::string format_point(const std::vector<double>& x) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

std::string format_indices(const std::vector<std::size_t>& idx) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << "f" << idx[i] + 1;
  os << "}";
  return os.str();
}

/// Real roots of c0 + c1 s + c2 s^2 (degree <= 2).
std::vector<double> real_roots(const std::vector<double>& c) {
  double c0 = c.empty() ? 0.0 : c[0];
  double c1 = c.size() > 1 ? c[1] : 0.0;
  double c2 = c.size() > 2 ? c[2] : 0.0;
  if (c2 == 0.0) {
    if (c1 == 0.0) return {};
    return {-c0 / c1};
  }
  double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc < 0.0) return {};
  double sq = std::sqrt(disc);
  double q = -0.5 * (c1 + (c1 >= 0 ? sq : -sq));
  if (q == 0.0) return {0.0};
  return {q / c2, c0 / q};
}

struct HoleBox {
  std::size_t index;
  std::vector<bool> bounded;  // per ambient coordinate
  RationalVector center, half;
};

std::optional<HoleBox> hole_box(const Primitive& p, std::size_t index) {
  const Primitive* base = &p;
  std::vector<std::size_t> axes;
  if (p.kind() == PrimitiveKind::cylinder) {
    const auto& cyl = std::get<CylinderData>(p.data());
    base = cyl.base.get();
    axes = cyl.axes;
  }
  if (base->kind() != PrimitiveKind::ellipsoid_hole) return std::nullopt;
  if (axes.empty()) {
    axes.resize(base->dim());
    for (std::size_t i = 0; i < axes.size(); ++i) axes[i] = i;
  }
  const auto& e = std::get<EllipsoidData>(base->data());
  HoleBox box{index, std::vector<bool>(p.dim(), false), RationalVector(p.dim(), Rational(0)),
              RationalVector(p.dim(), Rational(0))};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    box.bounded[axes[i]] = true;
    box.center[axes[i]] = e.center[i];
    box.half[axes[i]] = sqrt_upper_bound(e.squared_semi_axes[i]);
  }
  return box;
}

/// f > 0 at every vertex of the box (restricted to f's support) proves f > 0 on the box
/// when the minimum of f over boxes sits at vertices.
bool positive_on_box(const Primitive& p, const HoleBox& box) {
  if (!p.min_at_box_vertices()) return false;
  std::vector<std::size_t> support = p.f().support();
  for (std::size_t k : support) {
    if (!box.bounded[k]) return false;
  }
  RationalVector x = box.center;
  const std::size_t corners = std::size_t{1} << support.size();
  for (std::size_t mask = 0; mask < corners; ++mask) {
    for (std::size_t b = 0; b < support.size(); ++b) {
      std::size_t k = support[b];
      x[k] = (mask >> b) & 1 ? Rational(box.center[k] + box.half[k]) : Rational(box.center[k] - box.half[k]);
    }
    if (p.f().eval(x) <= 0) return false;
  }
  return true;
}

bool boxes_separated(const HoleBox& a, const HoleBox& b) {
  for (std::size_t k = 0; k < a.center.size(); ++k) {
    if (!a.bounded[k] || !b.bounded[k]) continue;
    Rational gap = a.center[k] - b.center[k];
    if (gap < 0) gap = -gap;
    // x1 extents may share a pole abscissa; elsewhere a strict gap is required.
    if (gap > a.half[k] + b.half[k]) return true;
  }
  return false;
}

std::vector<std::vector<double>> plane_bases(const Arrangement& A) {
  std::vector<std::vector<double>> bases{A.seed_double()};
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (auto box = hole_box(A.primitive(j), j)) bases.push_back(to_doubles(box->center));
  }
  return bases;
}

/// A point of D within r grid steps (Chebyshev, in the grid plane) of node (row, col),
/// searched on a subgrid of step/8.
bool strict_point_near(const Arrangement& A, const PlaneGrid& g, std::size_t row, std::size_t col, int r) {
  std::vector<double> x = g.point(row, col);
  const double u = x[0], v = x[g.axis], h = g.step / 8;
  const int span = 8 * r;
  for (int a = -span; a <= span; ++a) {
    for (int b = -span; b <= span; ++b) {
      x[0] = u + a * h;
      x[g.axis] = v + b * h;
      bool inside = true;
      for (std::size_t j = 0; j < A.size() && inside; ++j) inside = A.compiled(j)(x) > kActivationTolerance;
      if (inside) return true;
    }
  }
  return false;
}

ConditionVerdict check_closure_and_connectivity(const Arrangement& A, const NcdBudget& budget, const Window& w,
                                                ConditionVerdict& connectivity) {
  ConditionVerdict closure{"closure", true, "", 0, {}};
  connectivity = {"connectivity", true, "", 0, {}};
  const int r = budget.closure_radius;
  std::size_t planes = 0, refined = 0;
  std::ostringstream conn_detail;
  for (const auto& base : plane_bases(A)) {
    for (std::size_t axis = 1; axis < std::max<std::size_t>(A.n(), 2); ++axis) {
      if (A.n() < 2) break;
      PlaneGrid g = plane_grid(A, axis, base, w, budget.grid_step);
      ++planes;
      // dilate strict cells by r in both grid directions
      std::vector<std::uint8_t> rowdil(g.strict.size(), 0), dil(g.strict.size(), 0);
      for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t c = 0; c < g.cols; ++c) {
          if (!g.strict[i * g.cols + c]) continue;
          std::size_t lo = c >= static_cast<std::size_t>(r) ? c - r : 0;
          std::size_t hi = std::min(g.cols - 1, c + r);
          for (std::size_t k = lo; k <= hi; ++k) rowdil[i * g.cols + k] = 1;
        }
      }
      for (std::size_t i = 0; i < g.rows; ++i) {
        std::size_t lo = i >= static_cast<std::size_t>(r) ? i - r : 0;
        std::size_t hi = std::min(g.rows - 1, i + r);
        for (std::size_t c = 0; c < g.cols; ++c) {
          if (!rowdil[i * g.cols + c]) continue;
          for (std::size_t k = lo; k <= hi; ++k) dil[k * g.cols + c] = 1;
        }
      }
      for (std::size_t i = 0; i < g.rows; ++i) {
        for (std::size_t c = 0; c < g.cols; ++c) {
          std::size_t id = i * g.cols + c;
          if (!g.closed[id]) continue;
          ++closure.checked;
          if (dil[id]) continue;
          // Acute corners of a section can hide the open set between grid nodes.
          ++refined;
          if (!strict_point_near(A, g, i, c, r)) record(closure, g.point(i, c));
        }
      }
      std::size_t comps = strict_components(g);
      ++connectivity.checked;
      if (comps != 1) {
        connectivity.passed = false;
        conn_detail << "plane (x1,x" << axis + 1 << ") through " << format_point(base) << ": " << comps
                    << " components; ";
        if (connectivity.counterexamples.size() < kMaxCounterexamples) connectivity.counterexamples.push_back(base);
      }
    }
  }
  std::ostringstream os;
  os << planes << " planes, step " << budget.grid_step;
  closure.detail = os.str() + ", " + std::to_string(refined) + " nodes refined on a 1/8 subgrid" +
                   (closure.passed ? "" : "; closed grid points far from the open set");
  connectivity.detail = os.str() + (connectivity.passed ? "; one component per plane" : "; " + conn_detail.str());
  return closure;
}

ConditionVerdict check_off_component(const Arrangement& A, const NcdBudget& budget, const Window& w, Rng& rng,
                                     const std::vector<std::vector<double>>& interior) {
  ConditionVerdict v{"off_component", true, "", 0, {}};
  const std::size_t n = A.n();
  std::size_t with_extra = 0;
  for (std::size_t j = 0; j < A.size(); ++j) {
    auto others = A.primitive(j).other_components();
    if (others.empty()) continue;
    ++with_extra;
    std::vector<std::size_t> support = A.primitive(j).f().support();
    std::size_t found = 0;
    for (std::size_t attempt = 0; attempt < 40 * budget.off_component_samples && found < budget.off_component_samples;
         ++attempt) {
      std::vector<double> base(n);
      if (!interior.empty() && attempt % 2 == 0) {
        base = interior[rng.index(interior.size())];
      } else {
        for (std::size_t k = 0; k < n; ++k) base[k] = rng.uniform(w.lo[k], w.hi[k]);
      }
      std::vector<double> dir(n, 0.0);
      if (attempt % 3 != 2 && !support.empty()) {
        dir[support[rng.index(support.size())]] = 1.0;
      } else {
        double norm = 0.0;
        for (auto& d : dir) {
          d = rng.normal();
          norm += d * d;
        }
        for (auto& d : dir) d /= std::sqrt(norm);
      }
      for (double s : real_roots(A.compiled(j).line_coefficients(base, dir))) {
        std::vector<double> p(n);
        bool in_window = true;
        for (std::size_t k = 0; k < n; ++k) {
          p[k] = base[k] + s * dir[k];
          in_window = in_window && p[k] >= w.lo[k] && p[k] <= w.hi[k];
        }
        if (!in_window) continue;
        bool off = false;
        for (const auto& c : others) off = off || c.contains(p);
        if (!off) continue;
        ++found;
        ++v.checked;
        bool all_nonneg = true;
        for (std::size_t k = 0; k < A.size() && all_nonneg; ++k) {
          if (k != j && A.compiled(k)(p) < -kActivationTolerance) all_nonneg = false;
        }
        if (all_nonneg) {
          if (v.passed) v.detail = "f" + std::to_string(j + 1) + " has a zero outside S in the closure at " + format_point(p);
          record(v, p);
        }
      }
    }
  }
  if (v.passed) {
    v.detail = std::to_string(with_extra) + " primitives with extra components, " + std::to_string(v.checked) +
               " off-component zeros sampled, none in the closure";
  }
  return v;
}

ConditionVerdict check_transversality(const Arrangement& A, const std::vector<TupleResult>& tuples,
                                      const std::vector<BoundaryPoint>& boundary) {
  ConditionVerdict v{"transversality", true, "", 0, {}};
  std::size_t found = 0, missing = 0, exact = 0;
  for (const auto& t : tuples) {
    if (t.points.empty()) {
      ++missing;
      continue;
    }
    ++found;
    for (const auto& p : t.points) {
      ++v.checked;
      if (p.exact) ++exact;
      if (!p.transversality.passed) {
        const std::vector<double> where = p.exact ? to_doubles(*p.exact) : p.x;
        if (v.passed) {
          std::ostringstream os;
          os << format_indices(t.indices) << " at " << format_point(where);
          if (p.transversality.zero_gradient) {
            os << ": gradient of f" << p.transversality.zero_gradient_index + 1 << " vanishes";
          } else {
            os << ": " << (p.transversality.exact ? "exact" : "numerical") << " rank " << p.transversality.rank
               << " < " << t.indices.size();
          }
          v.detail = os.str();
        }
        record(v, where);
      }
    }
  }
  for (const auto& b : boundary) {
    ++v.checked;
    auto rep = check_transversality_at(A, std::span<const double>(b.x), b.active);
    if (!rep.passed) {
      if (v.passed) v.detail = "boundary sample " + format_point(b.x) + " active " + format_indices(b.active) + " fails";
      record(v, b.x);
    }
  }
  if (v.passed) {
    std::ostringstream os;
    os << found << " tuples located (" << exact << " exact points), " << missing << " tuples not found, "
       << boundary.size() << " boundary samples";
    v.detail = os.str();
  }
  return v;
}

ConditionVerdict check_hole_disjointness(const Arrangement& A, const IntersectionConfig& cfg, Rng& rng) {
  ConditionVerdict v{"hole_disjointness", true, "", 0, {}};
  std::vector<HoleBox> holes;
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (auto b = hole_box(A.primitive(j), j)) holes.push_back(*b);
  }
  auto witness_search = [&](std::size_t a, std::size_t b, const RationalVector& center) {
    std::vector<std::size_t> idx{a, b};
    for (int s = 0; s < 20; ++s) {
      std::vector<double> start = to_doubles(center);
      for (auto& x : start) x += 0.3 * rng.normal();
      auto x = solve_zero_set(A, idx, start, cfg);
      if (x && A.primitive(a).component().contains(*x) && A.primitive(b).component().contains(*x)) return x;
    }
    return std::optional<std::vector<double>>{};
  };
  for (std::size_t h = 0; h < holes.size(); ++h) {
    const auto& box = holes[h];
    for (std::size_t k = 0; k < A.size(); ++k) {
      if (k == box.index) continue;
      auto other = std::find_if(holes.begin(), holes.end(), [&](const HoleBox& b) { return b.index == k; });
      if (other != holes.end() && k < box.index) continue;  // pair already handled
      ++v.checked;
      bool certified = other != holes.end() ? boxes_separated(box, *other) : positive_on_box(A.primitive(k), box);
      if (certified) continue;
      auto w = witness_search(box.index, k, box.center);
      std::string pair = "hole f" + std::to_string(box.index + 1) + " and f" + std::to_string(k + 1);
      if (w) {
        if (v.passed) v.detail = pair + " meet at " + format_point(*w);
        record(v, *w);
      } else {
        if (v.passed) v.detail = pair + ": separation not certified and no common point found";
        v.passed = false;
      }
    }
  }
  if (v.passed) v.detail = std::to_string(holes.size()) + " holes, all pairs separated exactly";
  return v;
}

}  // namespace

std::vector<double> PlaneGrid::point(std::size_t row, std::size_t col) const {
  std::vector<double> x = base;
  x[0] = u0 + static_cast<double>(col) * step;
  x[axis] = v0 + static_cast<double>(row) * step;
  return x;
}

PlaneGrid plane_grid(const Arrangement& A, std::size_t axis, const std::vector<double>& base, const Window& w,
                     double step) {
  if (axis == 0 || axis >= A.n()) throw InputError("plane axis must be a coordinate other than x1");
  PlaneGrid g;
  g.axis = axis;
  g.base = base;
  g.step = step;
  g.u0 = w.lo[0];
  g.v0 = w.lo[axis];
  g.cols = static_cast<std::size_t>(std::floor((w.hi[0] - w.lo[0]) / step + 1e-9)) + 1;
  g.rows = static_cast<std::size_t>(std::floor((w.hi[axis] - w.lo[axis]) / step + 1e-9)) + 1;
  g.closed.assign(g.rows * g.cols, 0);
  g.strict.assign(g.rows * g.cols, 0);
  std::vector<double> dir(A.n(), 0.0);
  dir[0] = 1.0;
  const double umax = g.u0 + static_cast<double>(g.cols - 1) * step;
  for (std::size_t i = 0; i < g.rows; ++i) {
    std::vector<double> x = g.point(i, 0);
    x[0] = 0.0;
    // Membership along the row comes from the exact quadratic restriction of every f_j.
    IntervalSet closed = IntervalSet::single(g.u0, umax);
    IntervalSet strict = closed;
    for (std::size_t j = 0; j < A.size() && !closed.empty(); ++j) {
      auto c = A.compiled(j).line_coefficients(x, dir);
      closed = closed.intersect(positive_set(c, g.u0, umax, kActivationTolerance));
      strict = strict.intersect(positive_set(c, g.u0, umax, -kActivationTolerance));
    }
    auto fill = [&](const IntervalSet& set, std::vector<std::uint8_t>& out) {
      for (const auto& [a, b] : set.parts()) {
        double first = std::ceil((a - g.u0) / step - 1e-12);
        double last = std::floor((b - g.u0) / step + 1e-12);
        for (double c = std::max(first, 0.0); c <= last && c < static_cast<double>(g.cols); c += 1.0) {
          out[i * g.cols + static_cast<std::size_t>(c)] = 1;
        }
      }
    };
    fill(closed, g.closed);
    fill(strict, g.strict);
  }
  return g;
}

std::size_t strict_components(const PlaneGrid& g) {
  UnionFind uf(g.rows * g.cols);
  std::size_t members = 0;
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t c = 0; c < g.cols; ++c) {
      std::size_t id = i * g.cols + c;
      if (!g.strict[id]) continue;
      ++members;
      if (c + 1 < g.cols && g.strict[id + 1]) uf.unite(id, id + 1);
      if (i + 1 < g.rows && g.strict[id + g.cols]) uf.unite(id, id + g.cols);
    }
  }
  std::size_t roots = 0;
  for (std::size_t id = 0; id < g.strict.size(); ++id) {
    if (g.strict[id] && uf.find(id) == id) ++roots;
  }
  (void)members;
  return roots;
}

const ConditionVerdict* NcdReport::find(const std::string& id) const {
  for (const auto& c : conditions) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

NcdReport check_ncd(const Arrangement& A, const NcdBudget& budget, std::uint64_t seed) {
  NcdReport report;
  Rng rng(seed);
  Window w = default_window(A, budget.window_half_width, budget.window_pad);

  ConditionVerdict seed_check{"seed_interior", A.seed_is_interior(), "", 1, {}};
  seed_check.detail = seed_check.passed ? "seed point is interior" : "seed point is not interior (D may be empty)";
  if (!seed_check.passed) seed_check.counterexamples.push_back(A.seed_double());
  report.conditions.push_back(seed_check);

  ConditionVerdict degree{"degree", true, "", A.size(), {}};
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (A.primitive(j).f().degree() > 2 || A.primitive(j).f().degree() < 1) {
      degree.passed = false;
      degree.detail = "f" + std::to_string(j + 1) + " has degree outside 1..2";
    }
  }
  if (degree.passed) degree.detail = "all constraints have degree 1 or 2";
  report.conditions.push_back(degree);

  Rng sample_rng = rng.fork(1);
  if (seed_check.passed) {
    report.interior_points = sample_region(A, budget.interior_samples, sample_rng.bits(), w).points;
    report.boundary_points = sample_boundary(A, budget.boundary_samples, sample_rng.bits(), w).points;
  }

  ConditionVerdict connectivity;
  report.conditions.push_back(check_closure_and_connectivity(A, budget, w, connectivity));

  Rng off_rng = rng.fork(2);
  report.conditions.push_back(check_off_component(A, budget, w, off_rng, report.interior_points));

  report.intersections = locate_intersections(A, w, budget.intersect, rng.fork(3).bits(), report.interior_points);
  report.conditions.push_back(check_transversality(A, report.intersections, report.boundary_points));
  report.conditions.push_back(connectivity);

  Rng hole_rng = rng.fork(4);
  report.conditions.push_back(check_hole_disjointness(A, budget.intersect, hole_rng));

  for (const auto& c : report.conditions) report.passed = report.passed && c.passed;
  return report;
}

}  // namespace ncd
