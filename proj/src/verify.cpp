#include "ncd/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace ncd {

namespace {

constexpr double kSpanTolerance = 1e-8;
constexpr double kClusterTolerance = 1e-6;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

void add_counterexample(CheckRecord& r, const std::vector<double>& x) {
  r.verdict = Verdict::fail;
  if (r.counterexamples.size() < 5) r.counterexamples.push_back(x);
}

std::vector<double> e1(std::size_t n) {
  std::vector<double> v(n, 0.0);
  v[0] = 1.0;
  return v;
}

bool in_closure(const Arrangement& A, std::span<const double> x) {
  return membership(A, x).where != Location::exterior;
}

/// A rational point of the closure with x1 = t, if the slice there is nonempty.
std::optional<RationalVector> exact_face_point(const Arrangement& A, const Rational& t, const Window& w, Rng& rng) {
  auto x = find_slice_point(A, to_double(t), w, true, rng);
  if (!x) return std::nullopt;
  for (long den : {1000L, 1000000L}) {
    RationalVector q{t};
    for (std::size_t k = 1; k < x->size(); ++k) q.push_back(approximate((*x)[k], den));
    if (membership(A, std::span<const Rational>(q)).where != Location::exterior) return q;
  }
  return std::nullopt;
}

/// e1 lies in the span of the active gradients at an exact point.
bool exact_critical(const Arrangement& A, const RationalVector& x, const std::vector<std::size_t>& active) {
  RationalMatrix rows;
  for (std::size_t j : active) {
    RationalVector g;
    for (const auto& d : A.primitive(j).f().gradient()) g.push_back(d.eval(x));
    rows.push_back(std::move(g));
  }
  RationalVector unit(A.n(), Rational(0));
  unit[0] = 1;
  return !rows.empty() && exact_in_row_span(rows, unit);
}

/// Exact Jacobian rank at the lift of a rational base point. Rows of inactive
/// constraints own a nonzero y-column; scaling that column to -2 keeps the rank.
std::size_t exact_lift_rank(const LiftedManifold& L, const RationalVector& x) {
  RationalVector q(L.ambient_dim(), Rational(0));
  std::copy(x.begin(), x.end(), q.begin());
  for (std::size_t j = 0; j < L.l(); ++j) {
    if (L.base().primitive(j).f().eval(x) != 0) q[L.block_offset(j)] = 1;
  }
  return exact_rank(L.jacobian(std::span<const Rational>(q)));
}

class LagrangeSolver {
 public:
  explicit LagrangeSolver(const Arrangement& A) : A_(A) {
    const std::size_t n = A.n();
    for (std::size_t j = 0; j < A.size(); ++j) {
      std::vector<std::vector<CompiledPolynomial>> h(n, std::vector<CompiledPolynomial>(n));
      auto grad = A.primitive(j).f().gradient();
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) h[a][b] = CompiledPolynomial(grad[a].partial(b));
      }
      hessians_.push_back(std::move(h));
    }
  }

  /// Critical point of x1 on the stratum {f_j = 0 : j in active} near x.
  std::optional<std::vector<double>> solve(std::vector<double> x, const std::vector<std::size_t>& active) const {
    const std::size_t n = A_.n(), k = active.size();
    std::vector<double> lambda = initial_multipliers(x, active);
    auto residual = [&](const std::vector<double>& xx, const std::vector<double>& lam, std::vector<double>& r) {
      r.assign(k + n, 0.0);
      std::vector<double> g(n);
      r[k] = 1.0;  // e1 - sum lam_i grad f_i
      for (std::size_t i = 0; i < k; ++i) {
        r[i] = A_.compiled(active[i])(xx);
        A_.compiled(active[i]).gradient(xx, g);
        for (std::size_t a = 0; a < n; ++a) r[k + a] -= lam[i] * g[a];
      }
      double s = 0.0;
      for (double v : r) s += v * v;
      return s;
    };
    std::vector<double> r, rt;
    double err = residual(x, lambda, r);
    std::vector<double> g(n);
    for (int it = 0; it < 60 && err > 1e-24; ++it) {
      DoubleMatrix J(k + n, std::vector<double>(n + k, 0.0));
      for (std::size_t i = 0; i < k; ++i) {
        A_.compiled(active[i]).gradient(x, g);
        for (std::size_t a = 0; a < n; ++a) {
          J[i][a] = g[a];
          J[k + a][n + i] = -g[a];
        }
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) J[k + a][b] -= lambda[i] * hessians_[active[i]][a][b](x);
        }
      }
      double trace = 0.0;
      for (const auto& row : J) {
        for (double v : row) trace += v * v;
      }
      std::vector<double> step = damped_min_norm_step(J, r, 1e-12 * trace / static_cast<double>(k + n) + 1e-300);
      bool improved = false;
      double lam_step = 1.0;
      std::vector<double> xt(n), lt(k);
      for (int back = 0; back < 30; ++back) {
        for (std::size_t a = 0; a < n; ++a) xt[a] = x[a] - lam_step * step[a];
        for (std::size_t i = 0; i < k; ++i) lt[i] = lambda[i] - lam_step * step[n + i];
        double e = residual(xt, lt, rt);
        if (e < err) {
          x = xt;
          lambda = lt;
          r = rt;
          err = e;
          improved = true;
          break;
        }
        lam_step *= 0.5;
      }
      if (!improved) break;
      for (double v : x) {
        if (!std::isfinite(v) || std::abs(v) > 1e6) return std::nullopt;
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (std::abs(A_.compiled(active[i])(x)) > 1e-10) return std::nullopt;
    }
    DoubleMatrix rows;
    for (std::size_t j : active) {
      A_.compiled(j).gradient(x, g);
      rows.push_back(g);
    }
    if (span_residual(rows, e1(n)) >= kSpanTolerance) return std::nullopt;
    return x;
  }

 private:
  std::vector<double> initial_multipliers(const std::vector<double>& x, const std::vector<std::size_t>& active) const {
    const std::size_t n = A_.n(), k = active.size();
    Eigen::MatrixXd G(n, static_cast<Eigen::Index>(k));
    std::vector<double> g(n);
    for (std::size_t i = 0; i < k; ++i) {
      A_.compiled(active[i]).gradient(x, g);
      for (std::size_t a = 0; a < n; ++a) G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(i)) = g[a];
    }
    Eigen::VectorXd target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    target(0) = 1.0;
    Eigen::VectorXd lam = G.completeOrthogonalDecomposition().solve(target);
    return std::vector<double>(lam.data(), lam.data() + lam.size());
  }

  const Arrangement& A_;
  std::vector<std::vector<std::vector<CompiledPolynomial>>> hessians_;
};

template <typename F>
CheckRecord timed(F&& f) {
  auto start = std::chrono::steady_clock::now();
  CheckRecord r = f();
  r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "fail";
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

std::vector<RationalVector> hole_poles(const Arrangement& A) {
  std::vector<RationalVector> out;
  for (const auto& p : A.primitives()) {
    if (p.kind() != PrimitiveKind::ellipsoid_hole) continue;
    const auto& e = std::get<EllipsoidData>(p.data());
    Rational root;
    if (!exact_sqrt(e.squared_semi_axes[0], root)) continue;
    for (int sign : {-1, 1}) {
      RationalVector x = e.center;
      x[0] += sign * root;
      out.push_back(std::move(x));
    }
  }
  return out;
}

StressedPoints stressed_base_points(const Arrangement& A, std::uint64_t seed, const Window& w,
                                    const IntersectionConfig& cfg) {
  StressedPoints out;
  Rng rng(seed);
  SampleSet interior = sample_region(A, 100, rng.bits(), w);
  for (const auto& b : sample_boundary(A, 200, rng.bits(), w).points) out.points.push_back(b.x);
  // Walk from interior points against grad f_j until the chord leaves D; keep exits on S_j.
  const std::size_t n = A.n();
  std::vector<double> g(n);
  for (std::size_t j = 0; j < A.size() && !interior.points.empty(); ++j) {
    std::size_t kept = 0;
    for (std::size_t attempt = 0; attempt < 30 && kept < 3; ++attempt) {
      const auto& x = interior.points[rng.index(interior.points.size())];
      A.compiled(j).gradient(x, g);
      double norm = 0.0;
      for (double v : g) norm += v * v;
      if (norm == 0.0) continue;
      std::vector<double> d(n);
      for (std::size_t k = 0; k < n; ++k) d[k] = -g[k] / std::sqrt(norm);
      auto part = feasible_chord(A, x, d, w, 0.0).part_containing(0.0);
      if (!part) continue;
      std::vector<double> p(n);
      for (std::size_t k = 0; k < n; ++k) p[k] = x[k] + part->second * d[k];
      if (std::abs(A.compiled(j)(p)) > 1e-9 || !in_closure(A, p)) continue;
      out.points.push_back(p);
      ++kept;
    }
  }
  for (const auto& t : locate_intersections(A, w, cfg, rng.bits(), interior.points)) {
    for (const auto& p : t.points) {
      if (!p.in_closure) continue;
      if (p.exact && membership(A, std::span<const Rational>(*p.exact)).where != Location::exterior) {
        out.exact.push_back(*p.exact);
      } else {
        out.points.push_back(p.x);
      }
    }
  }
  for (auto& pole : hole_poles(A)) {
    if (membership(A, std::span<const Rational>(pole)).where != Location::exterior) out.exact.push_back(pole);
  }
  return out;
}

CheckRecord verify_nonsingular(const LiftedManifold& L, std::size_t samples, std::uint64_t seed,
                               const StressedPoints& stressed) {
  CheckRecord r;
  r.id = "nonsingular";
  r.tolerance = "smallest singular value > 1e-8 x largest; exact rank at rational points";
  Rng rng(seed);
  Window w = default_window(L.base());
  ManifoldSample ms = sample_manifold(L, samples, rng.bits(), w);
  std::size_t numeric = 0, exact = 0;
  double worst_ratio = 1.0;
  auto check_numeric = [&](const std::vector<double>& q) {
    ++numeric;
    RankReport rep = numerical_rank(L.jacobian(q), kRankTolerance);
    worst_ratio = std::min(worst_ratio, rep.ratio);
    if (rep.rank != L.l()) add_counterexample(r, q);
  };
  for (const auto& q : ms.points) check_numeric(q);
  for (const auto& x : stressed.points) check_numeric(lift_point(L, x, rng));
  for (const auto& x : stressed.exact) {
    ++exact;
    if (exact_lift_rank(L, x) != L.l()) {
      RationalVector q(L.ambient_dim(), Rational(0));
      std::copy(x.begin(), x.end(), q.begin());
      add_counterexample(r, to_doubles(q));
    }
  }
  r.samples = numeric + exact;
  std::ostringstream os;
  os << ms.points.size() << " manifold samples, " << stressed.points.size() << " stressed float points, " << exact
     << " exact stressed points; worst singular value ratio " << fmt(worst_ratio);
  if (ms.shortfall) os << "; sampler shortfall " << ms.shortfall;
  if (r.verdict == Verdict::fail) os << "; rank deficient at " << r.counterexamples.size() << "+ points";
  r.detail = os.str();
  if (ms.points.size() < samples && r.verdict == Verdict::pass) r.verdict = Verdict::inconclusive;
  return r;
}

CheckRecord verify_nonsingular(const LiftedManifold& L, std::size_t samples, std::uint64_t seed) {
  Window w = default_window(L.base());
  Rng rng(seed ^ 0x5eedULL);
  StressedPoints stressed = stressed_base_points(L.base(), rng.bits(), w, IntersectionConfig{});
  return verify_nonsingular(L, samples, seed, stressed);
}

SingularSearch detect_singular_values(const LiftedManifold& L, std::size_t budget, std::uint64_t seed) {
  const Arrangement& A = L.base();
  SingularSearch out;
  Rng rng(seed);
  Window w = default_window(A);
  std::vector<SingularValue> hits;

  LagrangeSolver solver(A);
  StressedPoints stressed = stressed_base_points(A, rng.bits(), w, IntersectionConfig{});
  std::vector<std::vector<double>> starts = stressed.points;
  for (const auto& b : sample_boundary(A, budget, rng.bits(), w).points) starts.push_back(b.x);
  for (const auto& x : stressed.exact) starts.push_back(to_doubles(x));
  for (const auto& x0 : starts) {
    auto active = near_zero(A, x0, 1e-7);
    if (active.empty()) continue;
    ++out.strata_points;
    auto x = solver.solve(x0, active);
    if (!x || !in_closure(A, *x)) continue;
    bool on_components = true;
    for (std::size_t j : active) on_components = on_components && A.primitive(j).component().contains(*x);
    if (!on_components) continue;
    SingularValue s{(*x)[0], std::nullopt, *x, active, "stratum"};
    if (auto q = snap_exact(A, active, *x, 1000)) {
      if (membership(A, std::span<const Rational>(*q)).where != Location::exterior && exact_critical(A, *q, active)) {
        s.exact = (*q)[0];
      }
    }
    hits.push_back(std::move(s));
  }

  // Exact candidates: hole poles and the faces x1 = t1, x1 = tl.
  std::vector<std::pair<RationalVector, std::string>> candidates;
  for (auto& p : hole_poles(A)) candidates.emplace_back(std::move(p), "pole");
  const auto& t = A.provenance().t_values;
  if (!t.empty()) {
    for (const Rational& end : {t.front(), t.back()}) {
      if (auto q = exact_face_point(A, end, w, rng)) candidates.emplace_back(std::move(*q), "face");
    }
  }
  for (const auto& [q, source] : candidates) {
    ++out.exact_candidates;
    Membership m = membership(A, std::span<const Rational>(q));
    if (m.where != Location::boundary) continue;
    if (!exact_critical(A, q, m.active)) continue;
    hits.push_back({to_double(q[0]), q[0], to_doubles(q), m.active, source});
  }

  std::sort(hits.begin(), hits.end(), [](const SingularValue& a, const SingularValue& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.exact.has_value() > b.exact.has_value();
  });
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    std::size_t best = i;
    while (j < hits.size() && hits[j].value - hits[i].value <= kClusterTolerance) {
      if (!hits[best].exact && hits[j].exact) best = j;
      ++j;
    }
    SingularValue rep = hits[best];
    if (rep.exact) rep.value = to_double(*rep.exact);
    out.values.push_back(std::move(rep));
    i = j;
  }
  return out;
}

CheckRecord compare_singular_values(const SingularSearch& found, const RationalVector& expected) {
  CheckRecord r;
  r.id = "singular_values";
  r.tolerance = "sets equal at 1e-6";
  r.samples = found.strata_points + found.exact_candidates;
  std::vector<bool> matched(found.values.size(), false);
  std::vector<std::string> missing, extra;
  for (const auto& e : expected) {
    bool ok = false;
    for (std::size_t i = 0; i < found.values.size(); ++i) {
      if (std::abs(found.values[i].value - to_double(e)) <= kClusterTolerance) {
        matched[i] = true;
        ok = true;
      }
    }
    if (!ok) missing.push_back(to_string(e));
  }
  for (std::size_t i = 0; i < found.values.size(); ++i) {
    r.witnesses.push_back(found.values[i].witness);
    if (!matched[i]) {
      extra.push_back(fmt(found.values[i].value));
      add_counterexample(r, found.values[i].witness);
    }
  }
  std::ostringstream os;
  os << "detected {";
  for (std::size_t i = 0; i < found.values.size(); ++i) {
    const auto& v = found.values[i];
    os << (i ? ", " : "") << (v.exact ? to_string(*v.exact) : fmt(v.value)) << (v.exact ? "" : "~");
  }
  os << "}";
  if (!extra.empty()) {
    os << "; unexpected:";
    for (const auto& s : extra) os << " " << s;
  }
  if (!missing.empty()) {
    os << "; not found:";
    for (const auto& s : missing) os << " " << s;
    if (r.verdict == Verdict::pass) r.verdict = Verdict::inconclusive;
  }
  r.detail = os.str();
  return r;
}

CheckRecord verify_image_interval(const LiftedManifold& L, std::size_t samples, std::uint64_t seed) {
  const Arrangement& A = L.base();
  CheckRecord r;
  r.id = "image_interval";
  r.tolerance = "values within [t1 - 1e-12, tl + 1e-12]; 100 sweep bins";
  const auto& t = A.provenance().t_values;
  if (t.empty()) {
    r.verdict = Verdict::inconclusive;
    r.detail = "no expected range recorded for this arrangement";
    return r;
  }
  Rng rng(seed);
  Window w = default_window(A);
  ManifoldSample ms = sample_manifold(L, samples, rng.bits(), w);
  const double lo = to_double(t.front()), hi = to_double(t.back());
  const std::size_t bins = 100;
  std::vector<bool> hit(bins, false);
  auto bin_of = [&](double v) {
    auto b = static_cast<std::ptrdiff_t>(std::floor((v - lo) / (hi - lo) * static_cast<double>(bins)));
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1));
  };
  std::size_t checked = 0;
  for (const auto& q : ms.points) {
    double v = project(L, q).value;
    ++checked;
    if (v < lo - 1e-12 || v > hi + 1e-12) add_counterexample(r, q);
    hit[bin_of(v)] = true;
  }
  // Targeted fill of empty bins: a slice point at the bin center, lifted.
  std::size_t targeted = 0;
  for (std::size_t b = 0; b < bins; ++b) {
    if (hit[b]) continue;
    double mid = lo + (static_cast<double>(b) + 0.5) * (hi - lo) / static_cast<double>(bins);
    auto x = find_slice_point(A, mid, w, false, rng);
    if (!x) x = find_slice_point(A, mid, w, true, rng);
    if (!x) {
      add_counterexample(r, std::vector<double>{mid});
      continue;
    }
    ++targeted;
    ++checked;
    auto q = lift_point(L, *x, rng);
    if (std::abs(project(L, q).value - mid) > 1e-12) add_counterexample(r, q);
    hit[b] = true;
  }
  // Endpoints attained exactly.
  std::size_t endpoints = 0;
  for (const Rational& end : {t.front(), t.back()}) {
    if (auto q = exact_face_point(A, end, w, rng)) {
      ++endpoints;
      r.witnesses.push_back(to_doubles(*q));
    } else {
      r.verdict = Verdict::fail;
    }
  }
  r.samples = checked;
  std::ostringstream os;
  os << ms.points.size() << " sampled values, " << targeted << " bins filled by targeted slice points, " << endpoints
     << "/2 exact endpoint witnesses";
  if (r.verdict == Verdict::fail) os << "; failures recorded";
  r.detail = os.str();
  return r;
}

CheckRecord verify_slices(const Arrangement& A, const Profile& expected, const VerifyConfig& cfg,
                          std::vector<SliceClass>* out) {
  CheckRecord r;
  r.id = "slices";
  r.tolerance = "boundedness equals label; analytic and empirical agree; one grid component";
  std::ostringstream problems;
  std::size_t count = 0;
  for (const auto& iv : expected.intervals) {
    for (std::size_t i = 1; i <= cfg.slices_per_interval; ++i) {
      Rational frac(static_cast<long>(i), static_cast<long>(cfg.slices_per_interval + 1));
      frac.canonicalize();
      Rational t = iv.lo + (iv.hi - iv.lo) * frac;
      SliceClass s = classify_slice(A, t, cfg.slice);
      ++count;
      bool want_bounded = iv.label == 0;
      bool is_bounded = s.boundedness == Boundedness::bounded;
      std::vector<double> where = s.empirical.base_point.empty() ? std::vector<double>{s.t} : s.empirical.base_point;
      if (!s.agree) {
        problems << "t=" << to_string(t) << ": analytic " << to_string(s.analytic.verdict) << " vs empirical "
                 << to_string(s.empirical.verdict) << "; ";
        add_counterexample(r, where);
      } else if (s.boundedness == Boundedness::empty || is_bounded != want_bounded) {
        problems << "t=" << to_string(t) << ": " << to_string(s.boundedness) << " but label " << iv.label << "; ";
        add_counterexample(r, where);
      } else if (s.empirical.components != 1) {
        problems << "t=" << to_string(t) << ": " << s.empirical.components << " grid components; ";
        add_counterexample(r, where);
      }
      if (!s.empirical.escape_witness.empty()) r.witnesses.push_back(s.empirical.escape_witness);
      if (out) out->push_back(std::move(s));
    }
  }
  r.samples = count;
  r.detail = r.verdict == Verdict::pass ? std::to_string(count) + " slices match their labels" : problems.str();
  return r;
}

CheckRecord verify_fibers(const LiftedManifold& L, std::size_t samples, std::uint64_t seed) {
  const Arrangement& A = L.base();
  CheckRecord r;
  r.id = "fibers";
  r.tolerance = "|F_j| < 1e-10 (1 + |f_j|); fiber dimension <= m - n; no 0-sphere factors";
  Rng rng(seed);
  Window w = default_window(A);
  std::vector<std::vector<double>> bases = sample_region(A, samples, rng.bits(), w).points;
  for (const auto& b : sample_boundary(A, samples, rng.bits(), w).points) bases.push_back(b.x);
  for (const auto& p : hole_poles(A)) bases.push_back(to_doubles(p));
  std::size_t max_dim = 0;
  for (const auto& x : bases) {
    Fiber f = fiber_at(L, x);
    if (f.empty) {
      add_counterexample(r, x);
      continue;
    }
    max_dim = std::max(max_dim, f.dimension);
    bool ok = f.dimension <= L.m() - L.n();
    for (const auto& factor : f.factors) ok = ok && factor.dimension >= 1;
    auto q = lift_point(L, x, rng);
    for (std::size_t j = 0; j < L.l() && ok; ++j) {
      double fj = A.compiled(j)(x);
      double yy = 0.0;
      for (std::size_t k = 0; k < L.block_sizes()[j]; ++k) yy += q[L.block_offset(j) + k] * q[L.block_offset(j) + k];
      ok = std::abs(std::max(fj, 0.0) - yy) < 1e-10 * (1.0 + std::abs(fj)) && fj > -kActivationTolerance;
    }
    if (!ok) add_counterexample(r, x);
  }
  r.samples = bases.size();
  r.detail = std::to_string(bases.size()) + " base points; largest fiber dimension " + std::to_string(max_dim) +
             " (bound m - n = " + std::to_string(L.m() - L.n()) + ")";
  return r;
}

VerificationReport run_suite(const LiftedManifold& L, const VerifyConfig& cfg) {
  const Arrangement& A = L.base();
  VerificationReport rep;
  rep.instance = A.provenance().tag.empty() ? "arrangement" : A.provenance().tag;
  rep.seed = cfg.seed;
  rep.m = L.m();
  rep.n = L.n();
  rep.l = L.l();
  rep.include_timings = cfg.include_timings;
  Rng master(cfg.seed);
  const std::uint64_t s_ncd = master.bits(), s_stress = master.bits(), s_rank = master.bits(),
                      s_sing = master.bits(), s_image = master.bits(), s_fiber = master.bits();

  auto start = std::chrono::steady_clock::now();
  NcdReport ncd = check_ncd(A, cfg.ncd, s_ncd);
  double ncd_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (const auto& c : ncd.conditions) {
    CheckRecord r;
    r.id = "ncd." + c.id;
    r.verdict = c.passed ? Verdict::pass : Verdict::fail;
    r.tolerance = c.id == "transversality" ? "rank = |active| with ratio > 1e-8; exact when snapped"
                  : c.id == "closure"      ? "grid step " + fmt(cfg.ncd.grid_step) + ", radius 2 steps"
                                           : "activation 1e-9";
    r.detail = c.detail;
    r.samples = c.checked;
    r.counterexamples = c.counterexamples;
    r.wall_ms = ncd_ms / static_cast<double>(ncd.conditions.size());
    rep.checks.push_back(std::move(r));
  }

  Window w = default_window(A);
  StressedPoints stressed;
  rep.checks.push_back(timed([&] {
    stressed = stressed_base_points(A, s_stress, w, cfg.ncd.intersect);
    return verify_nonsingular(L, cfg.samples, s_rank, stressed);
  }));

  SingularSearch sing;
  rep.checks.push_back(timed([&] {
    sing = detect_singular_values(L, cfg.boundary_samples, s_sing);
    if (A.expected()) return compare_singular_values(sing, A.expected()->singular_values);
    CheckRecord r;
    r.id = "singular_values";
    r.verdict = Verdict::inconclusive;
    r.detail = "no expected profile";
    for (const auto& v : sing.values) r.witnesses.push_back(v.witness);
    return r;
  }));
  rep.singular_values = sing.values;

  rep.checks.push_back(timed([&] { return verify_image_interval(L, cfg.samples, s_image); }));
  if (A.expected()) {
    rep.checks.push_back(timed([&] { return verify_slices(A, *A.expected(), cfg, &rep.slices); }));
  }
  rep.checks.push_back(timed([&] { return verify_fibers(L, 200, s_fiber); }));

  for (const auto& c : rep.checks) rep.passed = rep.passed && c.verdict == Verdict::pass;
  return rep;
}

}  // namespace ncd
