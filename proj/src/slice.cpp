#include "ncd/slice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ncd/union_find.hpp"

namespace ncd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Polynomial fix_x1(const Polynomial& p, const Rational& t) {
  Polynomial out(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    Exponent f = e;
    Rational coef = c;
    for (std::uint32_t i = 0; i < e[0]; ++i) coef *= t;
    f[0] = 0;
    out.add_term(f, coef);
  }
  return out;
}

struct Bounds {
  std::vector<double> lo, hi;
  bool empty = false;
};

void tighten(Bounds& b, std::size_t k, double lo, double hi) {
  b.lo[k] = std::max(b.lo[k], lo);
  b.hi[k] = std::min(b.hi[k], hi);
  if (b.lo[k] > b.hi[k]) b.empty = true;
}

bool in_closure(const Arrangement& A, std::span<const double> x) {
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (A.compiled(j)(x) < -kActivationTolerance) return false;
  }
  return true;
}

bool strictly_inside(const Arrangement& A, std::span<const double> x) {
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (!(A.compiled(j)(x) > 0.0)) return false;
  }
  return true;
}

IntervalSet axis_chord(const Arrangement& A, const std::vector<double>& x, std::size_t k, const Window& w,
                       double slack) {
  std::vector<double> dir(x.size(), 0.0);
  dir[k] = 1.0;
  return feasible_chord(A, x, dir, w, slack);
}

}  // namespace

std::string to_string(Boundedness b) {
  switch (b) {
    case Boundedness::bounded: return "bounded";
    case Boundedness::unbounded: return "unbounded";
    case Boundedness::empty: return "empty";
  }
  return "empty";
}

AnalyticSlice classify_slice_analytic(const Arrangement& A, const Rational& t) {
  AnalyticSlice out;
  const std::size_t n = A.n();
  Bounds b{std::vector<double>(n, -kInf), std::vector<double>(n, kInf), false};
  std::ostringstream why;
  for (std::size_t j = 0; j < A.size() && !b.empty; ++j) {
    const Primitive& p = A.primitive(j);
    const PrimitiveKind kind = p.base_kind();
    if (kind == PrimitiveKind::ellipsoid_hole) continue;  // removes a bounded set only
    Polynomial g = fix_x1(p.f(), t);
    std::vector<std::size_t> vars = g.support();
    Rational constant = g.coefficient(Exponent(n, 0));
    if (vars.empty()) {
      if (constant < 0) {
        b.empty = true;
        why << "f" << j + 1 << " < 0 on the whole hyperplane";
      }
      continue;
    }
    if (kind == PrimitiveKind::ellipsoid_body) {
      // g = kappa - sum (x_k - a_k)^2 / r_k; every remaining variable is confined.
      const Primitive* base = &p;
      std::vector<std::size_t> axes;
      if (p.kind() == PrimitiveKind::cylinder) {
        base = std::get<CylinderData>(p.data()).base.get();
        axes = std::get<CylinderData>(p.data()).axes;
      } else {
        for (std::size_t i = 0; i < n; ++i) axes.push_back(i);
      }
      const auto& e = std::get<EllipsoidData>(base->data());
      double kappa = 1.0;
      if (axes[0] == 0) kappa -= std::pow(to_double(t - e.center[0]), 2) / to_double(e.squared_semi_axes[0]);
      if (kappa < 0) {
        b.empty = true;
        why << "ellipsoid f" << j + 1 << " misses the hyperplane";
        continue;
      }
      for (std::size_t i = 0; i < axes.size(); ++i) {
        if (axes[i] == 0) continue;
        double half = std::sqrt(kappa * to_double(e.squared_semi_axes[i]));
        double a = to_double(e.center[i]);
        tighten(b, axes[i], a - half, a + half);
      }
      continue;
    }
    if (g.degree() != 1 || vars.size() != 1) {
      out.supported = false;
      why << "f" << j + 1 << " is not a single-variable affine bound after fixing x1; ";
      continue;
    }
    const std::size_t k = vars.front();
    Exponent e(n, 0);
    e[k] = 1;
    Rational alpha = g.coefficient(e);
    double bound = to_double(-constant / alpha);
    if (alpha > 0) {
      tighten(b, k, bound, kInf);
    } else {
      tighten(b, k, -kInf, bound);
    }
  }
  if (b.empty) {
    out.verdict = Boundedness::empty;
    out.detail = why.str();
    return out;
  }
  std::vector<std::size_t> open_axes;
  for (std::size_t k = 1; k < n; ++k) {
    if (!std::isfinite(b.lo[k]) || !std::isfinite(b.hi[k])) open_axes.push_back(k);
  }
  out.verdict = open_axes.empty() ? Boundedness::bounded : Boundedness::unbounded;
  if (open_axes.empty()) {
    why << "every coordinate confined";
  } else {
    why << "unconfined:";
    for (std::size_t k : open_axes) why << " x" << k + 1;
  }
  out.detail = why.str();
  return out;
}

namespace {

/// Walks from a point of D toward the hyperplane x1 = t, alternating a move along
/// e1 to near the end of the current chord with re-centering of the other coordinates.
std::optional<std::vector<double>> walk_to_slice(const Arrangement& A, std::vector<double> x, double t, const Window& w,
                                                 bool closed) {
  const std::size_t n = A.n();
  std::vector<double> e1(n, 0.0);
  e1[0] = 1.0;
  auto recenter = [&] {
    for (std::size_t k = 1; k < n; ++k) {
      auto part = axis_chord(A, x, k, w, -kActivationTolerance).part_containing(0.0);
      if (part) x[k] += 0.5 * (part->first + part->second);
    }
  };
  for (int iter = 0; iter < 400; ++iter) {
    auto part = feasible_chord(A, x, e1, w, -kActivationTolerance).part_containing(0.0);
    if (!part) return std::nullopt;
    const double need = t - x[0];
    if (need >= part->first && need <= part->second) {
      x[0] = t;
      recenter();
      if (strictly_inside(A, x)) return x;
      if (closed && in_closure(A, x)) return x;
      return std::nullopt;
    }
    if (closed) {
      auto wide = feasible_chord(A, x, e1, w, kActivationTolerance).part_containing(0.0);
      if (wide && need >= wide->first && need <= wide->second) {
        x[0] = t;
        if (in_closure(A, x)) return x;
      }
    }
    const double step = need > 0 ? 0.9 * part->second : 0.9 * part->first;
    if (std::abs(step) < 1e-12) return std::nullopt;
    x[0] += step;
    recenter();
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<double>> find_slice_point(const Arrangement& A, double t, const Window& w, bool closed,
                                                    Rng& rng) {
  const std::size_t n = A.n();
  const double slack = closed ? kActivationTolerance : -kActivationTolerance;
  auto accept = [&](const std::vector<double>& x) { return closed ? in_closure(A, x) : strictly_inside(A, x); };
  if (strictly_inside(A, A.seed_double())) {
    if (auto x = walk_to_slice(A, A.seed_double(), t, w, closed)) return x;
  }
  for (int attempt = 0; attempt < 24; ++attempt) {
    std::vector<double> x = A.seed_double();
    if (attempt > 0) {
      for (std::size_t k = 1; k < n; ++k) x[k] = rng.uniform(w.lo[k], w.hi[k]);
    }
    x[0] = t;
    if (n == 1) return accept(x) ? std::optional(x) : std::nullopt;
    for (int sweep = 0; sweep < 4; ++sweep) {
      for (std::size_t k = 1; k < n; ++k) {
        IntervalSet chord = axis_chord(A, x, k, w, slack);
        if (chord.empty()) continue;
        auto longest = *std::max_element(chord.parts().begin(), chord.parts().end(), [](auto a, auto b) {
          return a.second - a.first < b.second - b.first;
        });
        x[k] = x[k] + 0.5 * (longest.first + longest.second);
      }
      if (accept(x)) return x;
    }
  }
  return std::nullopt;
}

EmpiricalSlice classify_slice_empirical(const Arrangement& A, double t, const SliceConfig& cfg) {
  EmpiricalSlice out;
  const std::size_t n = A.n();
  Window w = default_window(A, cfg.half_width);
  Rng rng(cfg.seed);
  auto base = find_slice_point(A, t, w, false, rng);
  if (!base) base = find_slice_point(A, t, w, true, rng);
  if (!base) return out;  // empty slice
  out.base_point = *base;
  if (n == 1) {
    out.verdict = Boundedness::bounded;
    out.components = 1;
    out.members = 1;
    out.enclosing_radius = std::abs(t);
    return out;
  }

  // Bounding box of the slice inside the window, grown from axis chords through members.
  std::vector<double> lo(n, kInf), hi(n, -kInf);
  auto absorb = [&](const std::vector<double>& x) {
    bool grew = false;
    for (std::size_t k = 1; k < n; ++k) {
      IntervalSet chord = axis_chord(A, x, k, w, kActivationTolerance);
      for (const auto& [a, b] : chord.parts()) {
        if (x[k] + a < lo[k] - 1e-9) {
          lo[k] = x[k] + a;
          grew = true;
        }
        if (x[k] + b > hi[k] + 1e-9) {
          hi[k] = x[k] + b;
          grew = true;
        }
      }
    }
    return grew;
  };
  absorb(*base);
  for (std::size_t k = 1; k < n; ++k) {
    if (lo[k] > hi[k]) lo[k] = hi[k] = (*base)[k];
  }

  const std::size_t d = n - 1;
  std::vector<std::size_t> counts(n, 1);
  std::vector<std::uint8_t> member;
  for (int round = 0; round < 5; ++round) {
    const double cap = std::floor(std::pow(static_cast<double>(cfg.grid_budget), 1.0 / static_cast<double>(d)) + 1e-9);
    std::size_t total = 1;
    for (std::size_t k = 1; k < n; ++k) {
      double target = std::ceil((hi[k] - lo[k]) / cfg.step);
      counts[k] = static_cast<std::size_t>(std::clamp(target, 2.0, std::max(2.0, cap)));
      total *= counts[k];
    }
    member.assign(total, 0);
    out.grid_points = total;
    out.members = 0;
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    x[0] = t;
    std::vector<std::vector<double>> probes;
    for (std::size_t id = 0; id < total; ++id) {
      std::size_t rem = id;
      for (std::size_t k = 1; k < n; ++k) {
        idx[k] = rem % counts[k];
        rem /= counts[k];
        x[k] = lo[k] + (static_cast<double>(idx[k]) + 0.5) * (hi[k] - lo[k]) / static_cast<double>(counts[k]);
      }
      if (strictly_inside(A, x)) {
        member[id] = 1;
        ++out.members;
        if (probes.size() < 64 && (out.members - 1) % 97 == 0) probes.push_back(x);
      }
    }
    bool grew = false;
    for (const auto& p : probes) grew = absorb(p) || grew;
    if (!grew) break;
  }

  // Components of the member cells under axis adjacency.
  UnionFind uf(member.size());
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t k = 2; k < n; ++k) stride[k] = stride[k - 1] * counts[k - 1];
  double radius = 0.0;
  for (std::size_t id = 0; id < member.size(); ++id) {
    if (!member[id]) continue;
    std::size_t rem = id;
    double norm2 = t * t;
    for (std::size_t k = 1; k < n; ++k) {
      std::size_t i = rem % counts[k];
      rem /= counts[k];
      double xk = lo[k] + (static_cast<double>(i) + 0.5) * (hi[k] - lo[k]) / static_cast<double>(counts[k]);
      norm2 += xk * xk;
      if (i + 1 < counts[k] && member[id + stride[k]]) uf.unite(id, id + stride[k]);
    }
    radius = std::max(radius, std::sqrt(norm2));
  }
  for (std::size_t id = 0; id < member.size(); ++id) {
    if (member[id] && uf.find(id) == id) ++out.components;
  }
  if (out.members == 0) out.components = 1;  // slice thinner than the grid; the base point is its witness

  // Escape ladder along each axis: member points at 2W, 4W and 8W mean unbounded.
  for (std::size_t k = 1; k < n && out.escape_witness.empty(); ++k) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> q = *base;
      bool escaped = true;
      for (double scale : {2.0, 4.0, 8.0}) {
        q[k] = sign * scale * cfg.half_width;
        if (!in_closure(A, q)) {
          escaped = false;
          break;
        }
      }
      if (escaped) {
        out.escape_witness = q;
        break;
      }
    }
  }
  if (!out.escape_witness.empty()) {
    out.verdict = Boundedness::unbounded;
  } else {
    out.verdict = Boundedness::bounded;
    double norm2 = 0.0;
    for (double v : *base) norm2 += v * v;
    out.enclosing_radius = std::max(radius, std::sqrt(norm2));
  }
  return out;
}

SliceClass classify_slice(const Arrangement& A, const Rational& t, const SliceConfig& cfg) {
  SliceClass s;
  s.t = to_double(t);
  s.analytic = classify_slice_analytic(A, t);
  s.empirical = classify_slice_empirical(A, s.t, cfg);
  const bool a_unbounded = s.analytic.verdict == Boundedness::unbounded;
  const bool e_unbounded = s.empirical.verdict == Boundedness::unbounded;
  s.agree = !s.analytic.supported || a_unbounded == e_unbounded;
  s.boundedness = s.empirical.verdict;
  return s;
}

}  // namespace ncd
