#include "ncd/lift.hpp"

#include <cmath>
#include <numeric>

namespace ncd {

std::vector<std::size_t> block_sizes(std::size_t total, std::size_t blocks) {
  if (blocks == 0) throw InputError("need at least one block");
  std::vector<std::size_t> out(blocks, total / blocks);
  for (std::size_t j = 0; j < total % blocks; ++j) ++out[j];
  return out;
}

std::size_t minimal_m(const Arrangement& A) { return A.n() + A.size(); }

LiftedManifold::LiftedManifold(std::shared_ptr<const Arrangement> base, std::size_t m)
    : base_(std::move(base)), m_(m) {
  const std::size_t n = base_->n(), l = base_->size();
  if (m_ < n + l) {
    throw InputError("m = " + std::to_string(m_) + " is too small: need m >= n + l = " + std::to_string(n + l));
  }
  blocks_ = ncd::block_sizes(m_ - n + l, l);
  ambient_ = n;
  for (std::size_t d : blocks_) {
    offsets_.push_back(ambient_);
    ambient_ += d;
  }
  std::vector<std::size_t> embed_x(n);
  std::iota(embed_x.begin(), embed_x.end(), 0);
  for (std::size_t j = 0; j < l; ++j) {
    Polynomial F = base_->primitive(j).f().remap(ambient_, embed_x);
    for (std::size_t k = 0; k < blocks_[j]; ++k) {
      Exponent e(ambient_, 0);
      e[offsets_[j] + k] = 2;
      F.add_term(e, Rational(-1));
    }
    gradients_.push_back(F.gradient());
    equations_.push_back(std::move(F));
  }
}

DoubleMatrix LiftedManifold::jacobian(std::span<const double> q) const {
  const std::size_t n = base_->n();
  DoubleMatrix J(equations_.size(), std::vector<double>(ambient_, 0.0));
  std::vector<double> g(n);
  for (std::size_t j = 0; j < equations_.size(); ++j) {
    base_->compiled(j).gradient(q.subspan(0, n), g);
    for (std::size_t k = 0; k < n; ++k) J[j][k] = g[k];
    for (std::size_t k = 0; k < blocks_[j]; ++k) J[j][offsets_[j] + k] = -2.0 * q[offsets_[j] + k];
  }
  return J;
}

RationalMatrix LiftedManifold::jacobian(std::span<const Rational> q) const {
  RationalMatrix J;
  for (const auto& grad : gradients_) {
    RationalVector row;
    for (const auto& d : grad) row.push_back(d.eval(q));
    J.push_back(std::move(row));
  }
  return J;
}

LiftedManifold lift(std::shared_ptr<const Arrangement> A, std::size_t m) { return LiftedManifold(std::move(A), m); }

LiftedManifold lift(const Arrangement& A, std::size_t m) {
  return LiftedManifold(std::make_shared<const Arrangement>(A), m);
}

Fiber fiber_at(const LiftedManifold& L, std::span<const double> p) {
  Fiber fiber;
  if (membership(L.base(), p).where == Location::exterior) {
    fiber.empty = true;
    return fiber;
  }
  for (std::size_t j = 0; j < L.l(); ++j) {
    double r = std::max(0.0, L.base().compiled(j)(p));
    if (r <= kActivationTolerance) r = 0.0;
    fiber.factors.push_back({L.block_sizes()[j] - 1, r});
    if (r > 0.0) fiber.dimension += L.block_sizes()[j] - 1;
  }
  return fiber;
}

std::vector<double> lift_point(const LiftedManifold& L, std::span<const double> x, Rng& rng) {
  std::vector<double> q(L.ambient_dim(), 0.0);
  std::copy(x.begin(), x.end(), q.begin());
  for (std::size_t j = 0; j < L.l(); ++j) {
    double r2 = L.base().compiled(j)(x);
    const std::size_t off = L.block_offset(j), d = L.block_sizes()[j];
    if (r2 <= 0.0) continue;  // active block: y_j = 0 exactly
    double norm = 0.0;
    while (norm < 1e-12) {
      norm = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        q[off + k] = rng.normal();
        norm += q[off + k] * q[off + k];
      }
      norm = std::sqrt(norm);
    }
    const double radius = std::sqrt(r2);
    for (std::size_t k = 0; k < d; ++k) q[off + k] *= radius / norm;
  }
  return q;
}

std::optional<RationalVector> lift_point_exact(const LiftedManifold& L, std::span<const Rational> x) {
  RationalVector q(L.ambient_dim(), Rational(0));
  std::copy(x.begin(), x.end(), q.begin());
  for (std::size_t j = 0; j < L.l(); ++j) {
    Rational r2 = L.base().primitive(j).f().eval(x);
    if (r2 < 0) return std::nullopt;
    Rational root;
    if (!exact_sqrt(r2, root)) return std::nullopt;
    q[L.block_offset(j)] = root;
  }
  return q;
}

ManifoldSample sample_manifold(const LiftedManifold& L, std::size_t count, std::uint64_t seed, const Window& w) {
  if (count == 0) throw InputError("sample count must be positive");
  Rng rng(seed);
  SampleSet base = sample_region(L.base(), count, rng.bits(), w);
  ManifoldSample out;
  for (const auto& x : base.points) out.points.push_back(lift_point(L, x, rng));
  out.shortfall = base.shortfall;
  return out;
}

Projection project(const LiftedManifold& L, std::span<const double> q) {
  if (q.size() != L.ambient_dim()) throw InputError("point is not in the ambient space of the manifold");
  return {std::vector<double>(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(L.n())), q[0]};
}

}  // namespace ncd
