#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ncd/polynomial.hpp"

namespace ncd {

/// Strict sign requirement on a polynomial: poly > 0 or poly < 0.
struct SignCondition {
  Polynomial poly;
  bool positive = true;
};

/// Selects one connected component of a zero set: a zero of f belongs to the
/// component iff every condition holds strictly. Empty means "the whole zero set".
struct ComponentDescriptor {
  std::vector<SignCondition> conditions;

  bool contains(std::span<const double> x) const;
  bool contains(std::span<const Rational> x) const;
  bool empty() const { return conditions.empty(); }
};

enum class PrimitiveKind { half_plane, hyperbola_region, ellipsoid_body, ellipsoid_hole, cylinder, generic };

std::string to_string(PrimitiveKind kind);
PrimitiveKind parse_primitive_kind(const std::string& tag);

enum class Side { plus, minus };
enum class HyperbolaVariant { left_ray, right_ray };  // (-inf, a] and [a, inf)
enum class RegionKind { plus, minus, flat };

using Point2 = std::array<Rational, 2>;

struct HalfPlaneData {
  Point2 p1;
  Point2 p2;
  Side side = Side::plus;
};

struct HyperbolaData {
  HyperbolaVariant variant = HyperbolaVariant::left_ray;
  Rational a, b, c;
  /// The two branches of (x1 - a)(x2 - b) = c; the primitive's boundary piece is `plus_branch`.
  ComponentDescriptor plus_branch;
  ComponentDescriptor minus_branch;
};

struct EllipsoidData {
  RationalVector center;
  RationalVector squared_semi_axes;
};

class Primitive;

struct CylinderData {
  /// Ambient coordinate receiving each coordinate of the base primitive.
  std::vector<std::size_t> axes;
  std::shared_ptr<const Primitive> base;
};

struct GenericData {};

/// One boundary piece of a domain: f > 0 on the side the piece contributes,
/// the zero-set component S selected by `component`, and exact construction data.
class Primitive {
 public:
  using Data = std::variant<HalfPlaneData, HyperbolaData, EllipsoidData, CylinderData, GenericData>;

  Primitive(PrimitiveKind kind, Polynomial f, ComponentDescriptor component, Data data, RationalVector witness);

  PrimitiveKind kind() const { return kind_; }
  const Polynomial& f() const { return f_; }
  const ComponentDescriptor& component() const { return component_; }
  const Data& data() const { return data_; }
  /// A point with f > 0 (exact).
  const RationalVector& witness() const { return witness_; }
  std::size_t dim() const { return f_.num_vars(); }

  /// Kind after unwrapping cylinders.
  PrimitiveKind base_kind() const;
  /// True for primitives whose f is concave, affine or multilinear, so its
  /// minimum over an axis-aligned box is attained at a box vertex.
  bool min_at_box_vertices() const;
  /// Rebuilds f from the stored construction data and compares (exact).
  bool metadata_consistent() const;
  /// Polynomials of the zero-set components that are not S (empty when the zero set is connected).
  std::vector<ComponentDescriptor> other_components() const;

 private:
  PrimitiveKind kind_;
  Polynomial f_;
  ComponentDescriptor component_;
  Data data_;
  RationalVector witness_;
};

/// f vanishes on the line through p1, p2; side plus is {x2 >= a1 x1 + a2}
/// (or {x1 >= a} for a vertical line), side minus is the other closed half-plane.
Primitive half_plane(const Point2& p1, const Point2& p2, Side side);

/// Region between the branches of (x1 - a)(x2 - b) = c. Requires c > 0 for
/// left_ray and c < 0 for right_ray.
Primitive hyperbola_region(HyperbolaVariant variant, const Rational& a, const Rational& b, const Rational& c);

/// Body: f = 1 - sum (x_j - a_j)^2 / r_j. Hole: the negation.
Primitive ellipsoid(const RationalVector& center, const RationalVector& squared_semi_axes, bool hole);

/// Cylinder over a lower-dimensional primitive; base coordinate i goes to ambient axes[i].
Primitive embed(const Primitive& prim, std::size_t n, std::vector<std::size_t> axes);

/// Embeds a planar primitive in R^n keeping x1 and sending x2 to axis `coord` (0-based, >= 1).
Primitive embed_plane_primitive(const Primitive& prim, std::size_t n, std::size_t coord);

/// A primitive given only by its polynomial (used for hand-built test arrangements).
Primitive generic_primitive(Polynomial f, RationalVector witness, ComponentDescriptor component = {});

/// The half-plane / hyperbola families whose closures intersect to the regions
/// R_plus, R_minus (three increasing abscissae) and the flat region (two).
std::vector<Primitive> region_R(RegionKind kind, const RationalVector& s1, const Rational& s2, const Rational& s);

}  // namespace ncd
