#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ncd/arrangement.hpp"

namespace ncd {

/// M = { (x, y) : f_j(x) = |y_j|^2 for every j } in R^{n + sum d_j}.
/// Ambient coordinates are x1..xn followed by the y blocks in order.
class LiftedManifold {
 public:
  LiftedManifold(std::shared_ptr<const Arrangement> base, std::size_t m);

  const Arrangement& base() const { return *base_; }
  std::shared_ptr<const Arrangement> base_ptr() const { return base_; }
  std::size_t m() const { return m_; }
  std::size_t n() const { return base_->n(); }
  std::size_t l() const { return base_->size(); }
  const std::vector<std::size_t>& block_sizes() const { return blocks_; }
  /// First ambient index of block j.
  std::size_t block_offset(std::size_t j) const { return offsets_[j]; }
  std::size_t ambient_dim() const { return ambient_; }
  /// F_j = f_j(x) - sum_k y_{j,k}^2 in ambient variables.
  const std::vector<Polynomial>& equations() const { return equations_; }

  /// Jacobian of (F_1..F_l) at q, one row per equation.
  DoubleMatrix jacobian(std::span<const double> q) const;
  RationalMatrix jacobian(std::span<const Rational> q) const;

 private:
  std::shared_ptr<const Arrangement> base_;
  std::size_t m_;
  std::size_t ambient_;
  std::vector<std::size_t> blocks_;
  std::vector<std::size_t> offsets_;
  std::vector<Polynomial> equations_;
  std::vector<std::vector<Polynomial>> gradients_;
};

/// Smallest m accepted by lift: every block gets at least two y coordinates.
std::size_t minimal_m(const Arrangement& A);

/// Rejects m < n + l with the minimal admissible value in the message.
LiftedManifold lift(std::shared_ptr<const Arrangement> A, std::size_t m);
LiftedManifold lift(const Arrangement& A, std::size_t m);

/// Block sizes summing to total, as equal as possible, earlier blocks larger.
std::vector<std::size_t> block_sizes(std::size_t total, std::size_t blocks);

struct SphereFactor {
  std::size_t dimension;  // d_j - 1
  double squared_radius;  // f_j(p); 0 means the factor is a point
};

struct Fiber {
  bool empty = false;  // p outside the closure
  std::vector<SphereFactor> factors;
  std::size_t dimension = 0;  // sum of d_j - 1 over factors with positive radius
};

Fiber fiber_at(const LiftedManifold& L, std::span<const double> p);

/// Point of M over x (x in the closure): each y_j uniform on its sphere of squared radius max(f_j(x), 0).
std::vector<double> lift_point(const LiftedManifold& L, std::span<const double> x, Rng& rng);

/// Exact lift when every f_j(x) is a rational square: y_j = (sqrt f_j(x), 0, ..., 0).
std::optional<RationalVector> lift_point_exact(const LiftedManifold& L, std::span<const Rational> x);

struct ManifoldSample {
  std::vector<std::vector<double>> points;
  std::size_t shortfall = 0;
};

/// Base points from interior sampling of the arrangement, lifted with seeded sphere samples.
ManifoldSample sample_manifold(const LiftedManifold& L, std::size_t count, std::uint64_t seed, const Window& w);

struct Projection {
  std::vector<double> base;  // f_D(q)
  double value;              // f(q) = x1
};

Projection project(const LiftedManifold& L, std::span<const double> q);

}  // namespace ncd
