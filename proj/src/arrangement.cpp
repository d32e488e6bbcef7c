#include "ncd/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ncd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<CompiledPolynomial> compile_all(const std::vector<Primitive>& prims) {
  std::vector<CompiledPolynomial> out;
  out.reserve(prims.size());
  for (const auto& p : prims) out.emplace_back(p.f());
  return out;
}

RationalVector apply_affine(const RationalMatrix& A, const RationalVector& b, const RationalVector& x) {
  RationalVector y(b);
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t k = 0; k < x.size(); ++k) y[i] += A[i][k] * x[k];
  }
  return y;
}

double window_limit(std::span<const double> x, std::span<const double> dir, const Window& w, bool upper) {
  double bound = upper ? kInf : -kInf;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (dir[k] == 0.0) continue;
    double a = (w.lo[k] - x[k]) / dir[k];
    double b = (w.hi[k] - x[k]) / dir[k];
    if (a > b) std::swap(a, b);
    bound = upper ? std::min(bound, b) : std::max(bound, a);
  }
  return bound;
}

std::vector<double> random_direction(Rng& rng, std::size_t n) {
  std::vector<double> d(n, 0.0);
  if (rng.uniform() < 0.5) {
    d[rng.index(n)] = 1.0;
    return d;
  }
  double norm = 0.0;
  while (norm < 1e-12) {
    norm = 0.0;
    for (auto& v : d) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
  }
  for (auto& v : d) v /= norm;
  return d;
}

double min_value(const Arrangement& A, std::span<const double> x) {
  double m = kInf;
  for (std::size_t j = 0; j < A.size(); ++j) m = std::min(m, A.compiled(j)(x));
  return m;
}

bool inside_window(std::span<const double> x, const Window& w) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] < w.lo[k] || x[k] > w.hi[k]) return false;
  }
  return true;
}

}  // namespace

Arrangement::Arrangement(std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point,
                         Provenance provenance, std::optional<Profile> expected)
    : Arrangement(NoCheck{}, n, std::move(primitives), std::move(seed_point), std::move(provenance),
                  std::move(expected)) {
  if (!seed_is_interior()) throw InputError("seed point is not an interior point of the arrangement");
}

Arrangement Arrangement::unchecked(std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point,
                                   Provenance provenance) {
  return Arrangement(NoCheck{}, n, std::move(primitives), std::move(seed_point), std::move(provenance), std::nullopt);
}

Arrangement::Arrangement(NoCheck, std::size_t n, std::vector<Primitive> primitives, RationalVector seed_point,
                         Provenance provenance, std::optional<Profile> expected)
    : n_(n),
      primitives_(std::move(primitives)),
      seed_(std::move(seed_point)),
      provenance_(std::move(provenance)),
      expected_(std::move(expected)) {
  if (n_ == 0) throw InputError("arrangement dimension must be positive");
  if (primitives_.empty()) throw InputError("arrangement needs at least one primitive");
  for (std::size_t j = 0; j < primitives_.size(); ++j) {
    if (primitives_[j].dim() != n_) {
      throw InputError("primitive " + std::to_string(j + 1) + " has " + std::to_string(primitives_[j].dim()) +
                       " variables, expected " + std::to_string(n_));
    }
  }
  if (seed_.size() != n_) throw InputError("seed point has the wrong dimension");
  compiled_ = compile_all(primitives_);
}

bool Arrangement::seed_is_interior() const {
  for (const auto& p : primitives_) {
    if (p.f().eval(seed_) <= 0) return false;
  }
  return true;
}

Arrangement Arrangement::transformed(const RationalMatrix& A, const RationalVector& b) const {
  if (A.size() != n_ || b.size() != n_) throw InputError("affine map has the wrong dimension");
  RationalMatrix inv = exact_inverse(A);
  RationalVector shift = apply_affine(inv, RationalVector(n_, Rational(0)), b);
  for (auto& v : shift) v = -v;
  std::vector<Primitive> prims;
  for (const auto& p : primitives_) {
    ComponentDescriptor comp;
    for (const auto& c : p.component().conditions) comp.conditions.push_back({c.poly.affine_subst(inv, shift), c.positive});
    prims.push_back(generic_primitive(p.f().affine_subst(inv, shift), apply_affine(A, b, p.witness()), comp));
  }
  Provenance prov;
  prov.tag = provenance_.tag.empty() ? "affine image" : provenance_.tag + " (affine image)";
  return Arrangement(NoCheck{}, n_, std::move(prims), apply_affine(A, b, seed_), prov, std::nullopt);
}

Arrangement Arrangement::with_primitive(std::size_t j, Primitive p) const {
  std::vector<Primitive> prims = primitives_;
  prims.at(j) = std::move(p);
  return Arrangement(NoCheck{}, n_, std::move(prims), seed_, provenance_, expected_);
}

std::string to_string(Location where) {
  switch (where) {
    case Location::interior: return "interior";
    case Location::boundary: return "boundary";
    case Location::exterior: return "exterior";
  }
  return "exterior";
}

Membership membership(const Arrangement& A, std::span<const Rational> x) {
  if (x.size() != A.n()) throw InputError("point dimension does not match the arrangement");
  Membership m;
  for (std::size_t j = 0; j < A.size(); ++j) {
    Rational v = A.primitive(j).f().eval(x);
    if (v < 0) return {Location::exterior, {}};
    if (v == 0) m.active.push_back(j);
  }
  m.where = m.active.empty() ? Location::interior : Location::boundary;
  return m;
}

Membership membership(const Arrangement& A, std::span<const double> x, double tol) {
  if (x.size() != A.n()) throw InputError("point dimension does not match the arrangement");
  Membership m;
  for (std::size_t j = 0; j < A.size(); ++j) {
    double v = A.compiled(j)(x);
    if (v < -tol) return {Location::exterior, {}};
    if (v <= tol) m.active.push_back(j);
  }
  m.where = m.active.empty() ? Location::interior : Location::boundary;
  return m;
}

std::vector<std::size_t> near_zero(const Arrangement& A, std::span<const double> x, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < A.size(); ++j) {
    if (std::abs(A.compiled(j)(x)) <= tol) out.push_back(j);
  }
  return out;
}

TransversalityReport check_transversality_at(const Arrangement& A, std::span<const double> p,
                                             const std::vector<std::size_t>& active) {
  TransversalityReport r;
  r.active = active;
  DoubleMatrix rows;
  std::vector<double> g(A.n());
  for (std::size_t j : active) {
    A.compiled(j).gradient(p, g);
    double norm = 0.0;
    for (double v : g) norm += v * v;
    if (std::sqrt(norm) < 1e-12) {
      r.zero_gradient = true;
      r.zero_gradient_index = j;
      return r;
    }
    rows.push_back(g);
  }
  if (rows.empty()) {
    r.passed = true;
    return r;
  }
  RankReport rank = numerical_rank(rows, kRankTolerance);
  r.rank = rank.rank;
  r.ratio = rows.size() > A.n() ? 0.0 : rank.ratio;
  r.passed = r.rank == active.size();
  return r;
}

TransversalityReport check_transversality_at(const Arrangement& A, std::span<const Rational> p,
                                             const std::vector<std::size_t>& active) {
  TransversalityReport r;
  r.active = active;
  r.exact = true;
  RationalMatrix rows;
  for (std::size_t j : active) {
    RationalVector g;
    bool zero = true;
    for (const auto& d : A.primitive(j).f().gradient()) {
      g.push_back(d.eval(p));
      if (g.back() != 0) zero = false;
    }
    if (zero) {
      r.zero_gradient = true;
      r.zero_gradient_index = j;
      return r;
    }
    rows.push_back(std::move(g));
  }
  r.rank = exact_rank(rows);
  r.passed = r.rank == active.size();
  if (!rows.empty()) {
    DoubleMatrix drows;
    for (const auto& row : rows) drows.push_back(to_doubles(row));
    r.ratio = rows.size() > A.n() ? 0.0 : numerical_rank(drows, kRankTolerance).ratio;
  }
  return r;
}

Window default_window(const Arrangement& A, double half_width, double pad) {
  Window w;
  w.half_width = half_width;
  w.lo.assign(A.n(), -half_width);
  w.hi.assign(A.n(), half_width);
  const auto& t = A.provenance().t_values;
  if (!t.empty()) {
    w.lo[0] = to_double(t.front()) - pad;
    w.hi[0] = to_double(t.back()) + pad;
  } else {
    double s = to_double(A.seed_point()[0]);
    w.lo[0] = s - half_width;
    w.hi[0] = s + half_width;
  }
  return w;
}

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> parts) {
  std::sort(parts.begin(), parts.end());
  for (const auto& [a, b] : parts) {
    if (!(a <= b)) continue;
    if (!parts_.empty() && a <= parts_.back().second) {
      parts_.back().second = std::max(parts_.back().second, b);
    } else {
      parts_.emplace_back(a, b);
    }
  }
}

double IntervalSet::length() const {
  double total = 0.0;
  for (const auto& [a, b] : parts_) total += b - a;
  return total;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<std::pair<double, double>> out;
  std::size_t i = 0, k = 0;
  while (i < parts_.size() && k < other.parts_.size()) {
    double a = std::max(parts_[i].first, other.parts_[k].first);
    double b = std::min(parts_[i].second, other.parts_[k].second);
    if (a <= b) out.emplace_back(a, b);
    if (parts_[i].second < other.parts_[k].second) {
      ++i;
    } else {
      ++k;
    }
  }
  IntervalSet r;
  r.parts_ = std::move(out);
  return r;
}

std::optional<std::pair<double, double>> IntervalSet::part_containing(double s) const {
  for (const auto& p : parts_) {
    if (p.first <= s && s <= p.second) return p;
  }
  return std::nullopt;
}

IntervalSet positive_set(const std::vector<double>& c, double lo, double hi, double slack) {
  if (lo > hi) return {};
  double c0 = c.empty() ? 0.0 : c[0] + slack;
  double c1 = c.size() > 1 ? c[1] : 0.0;
  double c2 = c.size() > 2 ? c[2] : 0.0;
  if (c.size() > 3) {
    for (std::size_t i = 3; i < c.size(); ++i) {
      if (c[i] != 0.0) throw InputError("line restriction supports degree <= 2 only");
    }
  }
  auto whole = [&] { return IntervalSet::single(lo, hi); };
  if (c2 == 0.0) {
    if (c1 == 0.0) return c0 > 0 ? whole() : IntervalSet{};
    double r = -c0 / c1;
    if (c1 > 0) return IntervalSet::single(std::max(lo, r), hi);
    return IntervalSet::single(lo, std::min(hi, r));
  }
  double disc = c1 * c1 - 4.0 * c2 * c0;
  if (disc <= 0.0) return c2 > 0 ? whole() : IntervalSet{};
  double sq = std::sqrt(disc);
  double q = -0.5 * (c1 + (c1 >= 0 ? sq : -sq));
  double r1 = q / c2;
  double r2 = q != 0.0 ? c0 / q : -r1;
  if (r1 > r2) std::swap(r1, r2);
  if (c2 > 0) {
    return IntervalSet({{lo, std::min(hi, r1)}, {std::max(lo, r2), hi}});
  }
  return IntervalSet::single(std::max(lo, r1), std::min(hi, r2));
}

IntervalSet feasible_chord(const Arrangement& A, std::span<const double> x, std::span<const double> dir,
                           const Window& w, double slack) {
  double lo = window_limit(x, dir, w, false);
  double hi = window_limit(x, dir, w, true);
  IntervalSet set = IntervalSet::single(lo, hi);
  for (std::size_t j = 0; j < A.size() && !set.empty(); ++j) {
    set = set.intersect(positive_set(A.compiled(j).line_coefficients(x, dir), lo, hi, slack));
  }
  return set;
}

SampleSet sample_region(const Arrangement& A, std::size_t count, std::uint64_t seed, const Window& w) {
  if (count == 0) throw InputError("sample count must be positive");
  SampleSet out;
  const std::size_t n = A.n();
  std::vector<double> x = A.seed_double();
  if (membership(A, x).where != Location::interior || !inside_window(x, w)) {
    out.shortfall = count;
    return out;
  }
  Rng rng(seed);
  const std::size_t burn_in = 20 * n;
  const std::size_t thin = std::max<std::size_t>(2, n);
  // Chords are taken where every f_j exceeds the activation tolerance, so samples classify as interior.
  const double slack = -2.0 * kActivationTolerance;
  std::size_t step = 0, failures = 0;
  std::vector<double> cand(n);
  while (out.points.size() < count) {
    auto d = random_direction(rng, n);
    IntervalSet chord = feasible_chord(A, x, d, w, slack);
    bool moved = false;
    double total = chord.length();
    for (int attempt = 0; attempt < 10 && total > 0.0; ++attempt) {
      double u = rng.uniform() * total;
      double s = chord.parts().back().second;
      for (const auto& [a, b] : chord.parts()) {
        if (u <= b - a) {
          s = a + u;
          break;
        }
        u -= b - a;
      }
      for (std::size_t k = 0; k < n; ++k) cand[k] = x[k] + s * d[k];
      if (inside_window(cand, w) && membership(A, cand).where == Location::interior) {
        x = cand;
        moved = true;
        break;
      }
    }
    if (!moved && ++failures > 1000 * count) break;
    ++step;
    if (step > burn_in && (step - burn_in) % thin == 0) out.points.push_back(x);
  }
  out.shortfall = count - out.points.size();
  return out;
}

BoundarySampleSet sample_boundary(const Arrangement& A, std::size_t count, std::uint64_t seed, const Window& w) {
  if (count == 0) throw InputError("sample count must be positive");
  BoundarySampleSet out;
  Rng rng(seed);
  SampleSet base = sample_region(A, count, rng.bits(), w);
  if (base.points.empty()) {
    out.shortfall = count;
    return out;
  }
  const std::size_t n = A.n();
  std::vector<double> p(n);
  std::size_t tries = 0;
  const std::size_t max_tries = 50 * count;
  while (out.points.size() < count && tries < max_tries) {
    const auto& x = base.points[tries % base.points.size()];
    ++tries;
    auto d = random_direction(rng, n);
    if (rng.uniform() < 0.5) {
      for (auto& v : d) v = -v;
    }
    IntervalSet chord = feasible_chord(A, x, d, w, 0.0);
    auto part = chord.part_containing(0.0);
    if (!part) continue;
    double exit = part->second;
    double limit = window_limit(x, d, w, true);
    if (exit >= limit - 1e-9 * (1.0 + std::abs(limit))) continue;  // left the window, not D
    auto g = [&](double s) {
      for (std::size_t k = 0; k < n; ++k) p[k] = x[k] + s * d[k];
      return min_value(A, p);
    };
    double delta = 1e-6 * (1.0 + std::abs(exit));
    double a = std::max(0.0, exit - delta), b = exit + delta;
    for (int grow = 0; grow < 40 && g(a) <= 0.0; ++grow) a = std::max(0.0, exit - (delta *= 2.0));
    if (g(a) <= 0.0) continue;
    delta = 1e-6 * (1.0 + std::abs(exit));
    for (int grow = 0; grow < 40 && g(b) >= 0.0; ++grow) b = exit + (delta *= 2.0);
    if (g(b) >= 0.0) continue;
    double mid = exit, gm = g(mid);
    for (int it = 0; it < 200 && std::abs(gm) >= 1e-12; ++it) {
      mid = 0.5 * (a + b);
      gm = g(mid);
      if (gm > 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    if (std::abs(gm) >= 1e-12) {
      // fall back to the inside end of the bracket when bisection stalls in floating point
      mid = a;
      gm = g(mid);
      if (std::abs(gm) >= 1e-12) continue;
    }
    g(mid);
    BoundaryPoint bp{p, near_zero(A, p, kActivationTolerance)};
    if (bp.active.empty()) continue;
    out.points.push_back(std::move(bp));
  }
  out.shortfall = count - out.points.size();
  return out;
}

}  // namespace ncd
