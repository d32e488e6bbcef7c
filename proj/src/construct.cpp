#include "ncd/construct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ncd {

namespace {

const Rational kZero(0), kOne(1), kHalf(1, 2);

Primitive hp(const Rational& a1, const Rational& a2, const Rational& b1, const Rational& b2, Side side) {
  return half_plane({a1, a2}, {b1, b2}, side);
}

std::string label_string(const std::vector<int>& labels) {
  std::string s;
  for (int v : labels) s += static_cast<char>('0' + v);
  return s;
}

// -- hole placement ---------------------------------------------------------

struct FixedTerm {
  CompiledPolynomial f;
  std::vector<std::size_t> support;
};

class MarginSearch {
 public:
  MarginSearch(const std::vector<Primitive>& fixed, const std::vector<HoleGeometry>& placed, std::size_t n,
               const HoleRequest& req)
      : n_(n), u_(to_double(req.x1_lo)), v_(to_double(req.x1_hi)), half_width_(req.half_width) {
    for (const auto& p : fixed) {
      if (!p.min_at_box_vertices()) throw InputError("hole placement needs vertex-minimal fixed primitives");
      terms_.push_back({CompiledPolynomial(p.f()), p.f().support()});
    }
    for (const auto& h : placed) {
      double hu = to_double(h.center[0]) - std::sqrt(to_double(h.squared_semi_axes[0]));
      double hv = to_double(h.center[0]) + std::sqrt(to_double(h.squared_semi_axes[0]));
      if (hv < u_ || hu > v_) continue;  // x1 extents are disjoint
      placed_.push_back({to_doubles(h.center), std::sqrt(to_double(h.squared_semi_axes[1]))});
    }
  }

  /// Largest rho (up to the search range) with every fixed f_j > 0 on the box.
  double fixed_margin(const std::vector<double>& c) const {
    if (!box_ok(c, 0.0)) return -1.0;
    double lo = 0.0, hi = half_width_;
    if (box_ok(c, hi)) return hi;
    for (int it = 0; it < 40; ++it) {
      double mid = 0.5 * (lo + hi);
      (box_ok(c, mid) ? lo : hi) = mid;
    }
    return lo;
  }

  double margin(const std::vector<double>& c) const {
    double m = fixed_margin(c);
    for (const auto& [center, rho] : placed_) {
      double sep = 0.0;
      for (std::size_t k = 1; k < n_; ++k) sep = std::max(sep, std::abs(c[k] - center[k]));
      m = std::min(m, sep - rho);
    }
    return m;
  }

 private:
  bool box_ok(const std::vector<double>& c, double rho) const {
    std::vector<double> x = c;
    for (const auto& t : terms_) {
      const std::size_t corners = std::size_t{1} << t.support.size();
      for (std::size_t mask = 0; mask < corners; ++mask) {
        for (std::size_t b = 0; b < t.support.size(); ++b) {
          std::size_t k = t.support[b];
          bool up = (mask >> b) & 1;
          x[k] = k == 0 ? (up ? v_ : u_) : (up ? c[k] + rho : c[k] - rho);
        }
        if (!(t.f(x) > 0.0)) return false;
      }
    }
    return true;
  }

  std::size_t n_;
  double u_, v_, half_width_;
  std::vector<FixedTerm> terms_;
  std::vector<std::pair<std::vector<double>, double>> placed_;
};

bool exact_hole_ok(const std::vector<Primitive>& fixed, const std::vector<HoleGeometry>& placed,
                   const HoleRequest& req, const RationalVector& c, const Rational& rho) {
  for (const auto& p : fixed) {
    auto support = p.f().support();
    RationalVector x = c;
    const std::size_t corners = std::size_t{1} << support.size();
    for (std::size_t mask = 0; mask < corners; ++mask) {
      for (std::size_t b = 0; b < support.size(); ++b) {
        std::size_t k = support[b];
        bool up = (mask >> b) & 1;
        x[k] = k == 0 ? (up ? req.x1_hi : req.x1_lo) : (up ? Rational(c[k] + rho) : Rational(c[k] - rho));
      }
      if (p.f().eval(x) <= 0) return false;
    }
  }
  for (const auto& h : placed) {
    Rational r1, rh;
    exact_sqrt(h.squared_semi_axes[0], r1);
    exact_sqrt(h.squared_semi_axes[1], rh);
    if (h.center[0] + r1 < req.x1_lo || h.center[0] - r1 > req.x1_hi) continue;
    bool separated = false;
    for (std::size_t k = 1; k < c.size() && !separated; ++k) {
      Rational gap = c[k] - h.center[k];
      if (gap < 0) gap = -gap;
      separated = gap > rho + rh;
    }
    if (!separated) return false;
  }
  return true;
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::mt2 ? "mt2" : "mt3"; }

Variant parse_variant(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "mt2") return Variant::mt2;
  if (s == "mt3") return Variant::mt3;
  throw InputError("variant must be mt2 or mt3, got '" + text + "'");
}

void validate(const ConstructionInput& in) {
  const std::size_t l = in.t.size();
  if (l < 2) throw InputError("need at least two t values (l >= 2)");
  for (std::size_t j = 1; j < l; ++j) {
    if (!(in.t[j - 1] < in.t[j])) throw InputError("t values must be strictly increasing");
  }
  if (in.labels.size() != l - 1) {
    throw InputError("labels must have exactly l - 1 = " + std::to_string(l - 1) + " entries");
  }
  for (int v : in.labels) {
    if (v != 0 && v != 1) throw InputError("labels must be 0 or 1");
  }
  if (in.variant == Variant::mt3 && l == 3) throw InputError("MT3 requires l != 3");
  if (in.strip_half_width <= 0) throw InputError("strip half-width R must be positive");
  if (in.hole_shrink <= 0 || in.hole_shrink >= 1) throw InputError("hole_shrink must lie in (0, 1)");
}

Profile predicted_profile(const ConstructionInput& in) {
  validate(in);
  Profile p;
  for (std::size_t j = 0; j + 1 < in.t.size(); ++j) {
    p.intervals.push_back({in.t[j], in.t[j + 1], in.labels[j], in.labels[j] == 0});
  }
  p.singular_values = in.t;
  p.image_lo = in.t.front();
  p.image_hi = in.t.back();
  return p;
}

HoleGeometry choose_hole_geometry(const std::vector<Primitive>& fixed, const std::vector<HoleGeometry>& placed,
                                  std::size_t n, const HoleRequest& req, const Rational& shrink) {
  if (req.preferred.size() != n) throw InputError("preferred hole center has the wrong dimension");
  MarginSearch search(fixed, placed, n, req);
  RationalVector c = req.preferred;
  c[0] = (req.x1_lo + req.x1_hi) / 2;
  std::vector<double> cd = to_doubles(c);
  const long steps = static_cast<long>(std::floor(2.0 * req.half_width / to_double(req.grid_step) + 1e-9));
  const Rational lo_val = -Rational(static_cast<long>(std::floor(req.half_width)));
  double best = search.margin(cd);
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (std::size_t k = 1; k < n; ++k) {
      Rational best_val = c[k];
      best = search.margin(cd);
      const double pref = to_double(req.preferred[k]);
      auto consider = [&](const Rational& val) {
        cd[k] = to_double(val);
        double m = search.margin(cd);
        double cur = to_double(best_val);
        bool better = m > best + 1e-12;
        bool tie = std::abs(m - best) <= 1e-12 &&
                   (std::abs(cd[k] - pref) < std::abs(cur - pref) - 1e-15 ||
                    (std::abs(std::abs(cd[k] - pref) - std::abs(cur - pref)) <= 1e-15 && cd[k] < cur));
        if (better || tie) {
          best = std::max(best, m);
          best_val = val;
        }
      };
      consider(req.preferred[k]);
      for (long i = 0; i <= steps; ++i) consider(lo_val + req.grid_step * Rational(i));
      c[k] = best_val;
      cd[k] = to_double(best_val);
      best = search.margin(cd);
    }
  }
  if (!(best > 0.0)) {
    std::ostringstream os;
    os << "no feasible hole center for x1 in [" << to_string(req.x1_lo) << ", " << to_string(req.x1_hi)
       << "]: best margin " << best;
    throw InputError(os.str());
  }
  const long den = 1024;
  Rational rho(static_cast<long>(std::floor(to_double(shrink) * best * den + 1e-9)), den);
  rho.canonicalize();
  for (int halvings = 0; halvings < 30 && rho > 0 && !exact_hole_ok(fixed, placed, req, c, rho); ++halvings) rho /= 2;
  if (rho <= 0 || !exact_hole_ok(fixed, placed, req, c, rho)) {
    throw InputError("hole for x1 in [" + to_string(req.x1_lo) + ", " + to_string(req.x1_hi) +
                     "] failed exact verification");
  }
  HoleGeometry g;
  g.center = c;
  g.margin = best;
  Rational half1 = (req.x1_hi - req.x1_lo) / 2;
  g.squared_semi_axes.assign(n, rho * rho);
  g.squared_semi_axes[0] = half1 * half1;
  return g;
}

namespace {

struct Corridor {
  Rational s11, s12;
  std::size_t axis;
};

/// Largest x_c admissible for the flat region over x1 in [u, v] (0 meaning none; -1 unbounded).
Rational corridor_bound(const Corridor& c, const Rational& u, const Rational& v) {
  Rational bound = -1;
  if (u < c.s11) bound = 1 / (c.s11 - u);
  if (v > c.s12) {
    Rational b = 1 / (v - c.s12);
    if (bound < 0 || b < bound) bound = b;
  }
  return bound;
}

Rational corridor_preferred(const Corridor& c, const Rational& u, const Rational& v) {
  Rational b = corridor_bound(c, u, v);
  if (b < 0) return kOne;
  Rational half = b / 2;
  return half < kOne ? half : kOne;
}

Arrangement build_general(const ConstructionInput& in) {
  const std::size_t l = in.t.size();
  const auto& t = in.t;
  std::vector<Corridor> corridors;
  for (std::size_t i = 0; i + 1 < l; ++i) {
    if (in.labels[i] == 1) corridors.push_back({t[i], t[i + 1], corridors.size() + 2});
  }
  const bool all_zero_mt3 = in.variant == Variant::mt3 && corridors.empty();
  const std::size_t n = all_zero_mt3 ? 3 : corridors.size() + 3;

  std::vector<Primitive> prims;
  const Rational width = t.back() - t.front();
  const Rational mid = (t.front() + t.back()) / 2;
  Rational mid_height = kHalf;
  if (all_zero_mt3) {
    prims.push_back(ellipsoid({mid, kZero, kZero}, {width * width / 4, kOne, kOne}, false));
    mid_height = 0;
  } else {
    if (in.variant == Variant::mt2) {
      for (const auto& p : {hp(t.front(), 0, t.front(), 1, Side::plus), hp(t.front(), 0, t.back(), 0, Side::plus),
                            hp(t.back(), 0, t.back(), 1, Side::minus), hp(t.front(), 1, t.back(), 1, Side::minus)}) {
        prims.push_back(embed_plane_primitive(p, n, 1));
      }
    } else {
      prims.push_back(embed_plane_primitive(ellipsoid({mid, kZero}, {width * width / 4, kOne}, false), n, 1));
      mid_height = 0;
    }
    for (const auto& c : corridors) {
      for (const auto& p : region_R(RegionKind::flat, {c.s11, c.s12}, kZero, kOne)) {
        prims.push_back(embed_plane_primitive(p, n, c.axis));
      }
    }
    const Rational& R = in.strip_half_width;
    prims.push_back(embed_plane_primitive(hp(0, -R, 1, -R, Side::plus), n, n - 1));
    prims.push_back(embed_plane_primitive(hp(0, R, 1, R, Side::minus), n, n - 1));
  }

  // Seed: x1 in the first interval, mid-height, corridor coordinates inside their flat regions.
  RationalVector seed(n, kZero);
  seed[0] = (t[0] + t[1]) / 2;
  seed[1] = mid_height;
  for (const auto& c : corridors) seed[c.axis] = corridor_preferred(c, seed[0], seed[0]) / 2;

  const std::vector<Primitive> fixed = prims;
  std::vector<HoleGeometry> holes;
  for (std::size_t j = 1; j + 2 <= l - 1; ++j) {
    HoleRequest req;
    req.x1_lo = t[j];
    req.x1_hi = t[j + 1];
    req.preferred.assign(n, kZero);
    req.preferred[1] = mid_height;
    for (const auto& c : corridors) req.preferred[c.axis] = corridor_preferred(c, req.x1_lo, req.x1_hi);
    HoleGeometry g = choose_hole_geometry(fixed, holes, n, req, in.hole_shrink);
    holes.push_back(g);
    prims.push_back(ellipsoid(g.center, g.squared_semi_axes, true));
  }

  Provenance prov;
  prov.variant = to_string(in.variant);
  prov.t_values = t;
  prov.labels = in.labels;
  prov.strip_half_width = in.strip_half_width;
  prov.hole_shrink = in.hole_shrink;
  prov.tag = prov.variant + (all_zero_mt3 ? "/ellipsoid-with-holes/" : "/general/") + label_string(in.labels);
  return Arrangement(n, std::move(prims), std::move(seed), std::move(prov), predicted_profile(in));
}

}  // namespace

Arrangement build(const ConstructionInput& in) {
  validate(in);
  const std::size_t l = in.t.size();
  const auto& t = in.t;
  Provenance prov;
  prov.variant = to_string(in.variant);
  prov.t_values = t;
  prov.labels = in.labels;
  prov.strip_half_width = in.strip_half_width;
  prov.hole_shrink = in.hole_shrink;
  const std::string labels = label_string(in.labels);

  if (l >= 4) return build_general(in);

  std::vector<Primitive> prims;
  RationalVector seed{(t[0] + t[1]) / 2, kHalf};
  std::size_t n = 2;
  if (in.variant == Variant::mt2 && l == 2) {
    prims = {hp(t[0], 0, t[0], 1, Side::plus), hp(t[0], 0, t[1], 0, Side::plus), hp(t[1], 0, t[1], 1, Side::minus)};
    if (in.labels[0] == 0) prims.push_back(hp(t[0], 1, t[1], 1, Side::minus));
    prov.tag = "mt2/l2/" + labels;
  } else if (in.variant == Variant::mt2) {
    const int a = in.labels[0], b = in.labels[1];
    if (a == 0 && b == 0) {
      prims = {hp(t[0], 0, t[0], 1, Side::plus), hp(t[0], 0, t[1], 0, Side::plus), hp(t[1], 0, t[2], 1, Side::plus),
               hp(t[0], 1, t[2], 1, Side::minus)};
    } else if (a == 1 && b == 1) {
      prims = {hp(t[0], 0, t[0], 1, Side::plus), hp(t[0], 1, t[1], 0, Side::plus), hp(t[1], 0, t[2], 1, Side::plus),
               hp(t[2], 0, t[2], 1, Side::minus)};
      seed = {t[1], kOne};
    } else if (a == 1) {
      // The corner (t3, s2) must lie on (x1 - t2) x2 = s, so s2 = 1 forces s = t3 - t2.
      prims = region_R(RegionKind::plus, t, kOne, t[2] - t[1]);
    } else {
      prims = region_R(RegionKind::minus, t, kOne, t[1] - t[0]);
      seed = {(t[1] + t[2]) / 2, kHalf};
    }
    prov.tag = "mt2/l3/" + labels;
  } else {
    const Rational mid = (t[0] + t[1]) / 2;
    const Rational half = (t[1] - t[0]) / 2;
    if (in.labels[0] == 0) {
      prims = {ellipsoid({mid, kZero}, {half * half, kOne}, false)};
    } else {
      // The cylinder over the segment has two boundary lines; each becomes its own primitive
      // so that every boundary piece is a connected zero-set component.
      prims = {hp(t[0], 0, t[0], 1, Side::plus), hp(t[1], 0, t[1], 1, Side::minus)};
    }
    seed = {mid, kZero};
    prov.tag = "mt3/l2/" + labels;
  }
  return Arrangement(n, std::move(prims), std::move(seed), std::move(prov), predicted_profile(in));
}

}  // namespace ncd
