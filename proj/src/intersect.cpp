#include "ncd/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ncd {

namespace {

double max_abs_residual(const Arrangement& A, const std::vector<std::size_t>& idx, const std::vector<double>& x,
                        std::vector<double>& F) {
  F.resize(idx.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    F[i] = A.compiled(idx[i])(x);
    worst = std::max(worst, std::abs(F[i]));
  }
  return worst;
}

double sq_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

std::vector<double> random_point(Rng& rng, const Window& w) {
  std::vector<double> x(w.lo.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = rng.uniform(w.lo[k], w.hi[k]);
  return x;
}

bool close(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return false;
  }
  return true;
}

void search_tuple(const Arrangement& A, const Window& w, const IntersectionConfig& cfg, Rng& rng,
                  const std::vector<std::vector<double>>& anchors, std::size_t starts, TupleResult& result) {
  for (std::size_t s = 0; s < starts && result.points.size() < cfg.points_per_tuple; ++s) {
    std::vector<double> start;
    if (!anchors.empty() && s % 2 == 0) {
      start = anchors[rng.index(anchors.size())];
      for (std::size_t k = 0; k < start.size(); ++k) start[k] += 0.5 * rng.normal();
    } else {
      start = random_point(rng, w);
    }
    auto x = solve_zero_set(A, result.indices, std::move(start), cfg);
    if (!x) continue;
    bool on_components = true;
    for (std::size_t j : result.indices) {
      if (!A.primitive(j).component().contains(*x)) on_components = false;
    }
    if (!on_components) continue;
    bool duplicate = false;
    for (const auto& p : result.points) duplicate = duplicate || close(p.x, *x, 1e-6);
    if (duplicate) continue;
    LocatedPoint lp;
    lp.x = *x;
    lp.in_closure = membership(A, lp.x).where != Location::exterior;
    lp.exact = snap_exact(A, result.indices, lp.x, cfg.snap_denominator);
    lp.transversality = lp.exact ? check_transversality_at(A, std::span<const Rational>(*lp.exact), result.indices)
                                 : check_transversality_at(A, std::span<const double>(lp.x), result.indices);
    result.points.push_back(std::move(lp));
  }
}

}  // namespace

std::optional<std::vector<double>> solve_zero_set(const Arrangement& A, const std::vector<std::size_t>& indices,
                                                  std::vector<double> x, const IntersectionConfig& cfg) {
  const std::size_t n = A.n();
  std::vector<double> F, Ftrial, trial(n), g(n);
  DoubleMatrix J(indices.size(), std::vector<double>(n));
  double err = max_abs_residual(A, indices, x, F);
  for (std::size_t it = 0; it < cfg.max_iterations; ++it) {
    if (err < cfg.tolerance) return x;
    double trace = 0.0;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      A.compiled(indices[i]).gradient(x, J[i]);
      trace += sq_norm(J[i]);
    }
    if (trace == 0.0) return std::nullopt;
    double mu = 1e-12 * trace / static_cast<double>(indices.size());
    std::vector<double> step = damped_min_norm_step(J, F, mu);
    double base = sq_norm(F);
    double lambda = 1.0;
    bool improved = false;
    for (int back = 0; back < 30; ++back) {
      for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] - lambda * step[k];
      max_abs_residual(A, indices, trial, Ftrial);
      if (sq_norm(Ftrial) < base) {
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved) return std::nullopt;
    x = trial;
    err = max_abs_residual(A, indices, x, F);
    for (double v : x) {
      if (!std::isfinite(v) || std::abs(v) > 1e6) return std::nullopt;
    }
  }
  if (err < cfg.tolerance) return x;
  return std::nullopt;
}

std::optional<RationalVector> snap_exact(const Arrangement& A, const std::vector<std::size_t>& indices,
                                         const std::vector<double>& x, long max_den) {
  RationalVector q;
  q.reserve(x.size());
  for (double v : x) {
    Rational r = approximate(v, max_den);
    // Loose on purpose: tangential zeros converge only to ~sqrt(tolerance); the exact test below decides.
    if (std::abs(to_double(r) - v) > 1e-5) return std::nullopt;
    q.push_back(r);
  }
  for (std::size_t j : indices) {
    if (A.primitive(j).f().eval(q) != 0) return std::nullopt;
    if (!A.primitive(j).component().contains(std::span<const Rational>(q))) return std::nullopt;
  }
  return q;
}

std::vector<TupleResult> locate_intersections(const Arrangement& A, const Window& w, const IntersectionConfig& cfg,
                                              std::uint64_t seed,
                                              const std::vector<std::vector<double>>& anchors) {
  std::vector<TupleResult> results;
  const std::size_t l = A.size();
  if (cfg.max_tuple < 2 || l < 2) return results;
  Rng rng(seed);
  std::set<std::vector<std::size_t>> found;
  std::vector<std::vector<std::size_t>> frontier;
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = i + 1; j < l; ++j) frontier.push_back({i, j});
  }
  for (std::size_t size = 2; size <= cfg.max_tuple && !frontier.empty(); ++size) {
    std::vector<std::vector<std::size_t>> next_found;
    for (const auto& tuple : frontier) {
      TupleResult r{tuple, {}};
      Rng sub = rng.fork(results.size());
      search_tuple(A, w, cfg, sub, anchors, size == 2 ? cfg.starts : std::max<std::size_t>(2, cfg.starts / 2), r);
      if (!r.points.empty()) {
        found.insert(tuple);
        next_found.push_back(tuple);
      }
      results.push_back(std::move(r));
    }
    // Grow tuples by one index when every sub-tuple obtained by dropping an element was found.
    frontier.clear();
    for (const auto& t : next_found) {
      for (std::size_t k = t.back() + 1; k < l; ++k) {
        std::vector<std::size_t> grown = t;
        grown.push_back(k);
        bool all = true;
        for (std::size_t drop = 0; drop + 1 < grown.size() && all; ++drop) {
          std::vector<std::size_t> sub;
          for (std::size_t i = 0; i < grown.size(); ++i) {
            if (i != drop) sub.push_back(grown[i]);
          }
          all = found.count(sub) > 0;
        }
        if (all) frontier.push_back(std::move(grown));
      }
    }
  }
  return results;
}

}  // namespace ncd
