#include "ncd/primitive.hpp"

#include <numeric>

namespace ncd {

namespace {

ComponentDescriptor remap_descriptor(const ComponentDescriptor& d, std::size_t n,
                                     std::span<const std::size_t> axes) {
  ComponentDescriptor out;
  for (const auto& c : d.conditions) out.conditions.push_back({c.poly.remap(n, axes), c.positive});
  return out;
}

Polynomial var(std::size_t n, std::size_t i) { return Polynomial::variable(n, i); }
Polynomial cst(std::size_t n, const Rational& c) { return Polynomial::constant(n, c); }

bool is_identity(const std::vector<std::size_t>& axes) {
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] != i) return false;
  }
  return true;
}

}  // namespace

bool ComponentDescriptor::contains(std::span<const double> x) const {
  for (const auto& c : conditions) {
    double v = c.poly.eval(x);
    if (c.positive ? !(v > 0) : !(v < 0)) return false;
  }
  return true;
}

bool ComponentDescriptor::contains(std::span<const Rational> x) const {
  for (const auto& c : conditions) {
    Rational v = c.poly.eval(x);
    if (c.positive ? !(v > 0) : !(v < 0)) return false;
  }
  return true;
}

std::string to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::half_plane: return "half_plane";
    case PrimitiveKind::hyperbola_region: return "hyperbola_region";
    case PrimitiveKind::ellipsoid_body: return "ellipsoid_body";
    case PrimitiveKind::ellipsoid_hole: return "ellipsoid_hole";
    case PrimitiveKind::cylinder: return "cylinder";
    case PrimitiveKind::generic: return "generic";
  }
  return "generic";
}

PrimitiveKind parse_primitive_kind(const std::string& tag) {
  for (auto k : {PrimitiveKind::half_plane, PrimitiveKind::hyperbola_region, PrimitiveKind::ellipsoid_body,
                 PrimitiveKind::ellipsoid_hole, PrimitiveKind::cylinder, PrimitiveKind::generic}) {
    if (to_string(k) == tag) return k;
  }
  throw InputError("unknown primitive kind '" + tag + "'");
}

Primitive::Primitive(PrimitiveKind kind, Polynomial f, ComponentDescriptor component, Data data,
                     RationalVector witness)
    : kind_(kind),
      f_(std::move(f)),
      component_(std::move(component)),
      data_(std::move(data)),
      witness_(std::move(witness)) {
  if (witness_.size() != f_.num_vars()) throw InputError("primitive witness has the wrong dimension");
  if (f_.eval(witness_) <= 0) throw InputError("primitive witness does not satisfy f > 0");
}

PrimitiveKind Primitive::base_kind() const {
  if (kind_ == PrimitiveKind::cylinder) return std::get<CylinderData>(data_).base->base_kind();
  return kind_;
}

bool Primitive::min_at_box_vertices() const {
  switch (kind_) {
    case PrimitiveKind::half_plane:
    case PrimitiveKind::hyperbola_region:
    case PrimitiveKind::ellipsoid_body: return true;
    case PrimitiveKind::ellipsoid_hole: return false;
    case PrimitiveKind::cylinder: return std::get<CylinderData>(data_).base->min_at_box_vertices();
    case PrimitiveKind::generic: return f_.degree() <= 1;
  }
  return false;
}

bool Primitive::metadata_consistent() const {
  switch (kind_) {
    case PrimitiveKind::half_plane: {
      const auto& d = std::get<HalfPlaneData>(data_);
      return half_plane(d.p1, d.p2, d.side).f() == f_;
    }
    case PrimitiveKind::hyperbola_region: {
      const auto& d = std::get<HyperbolaData>(data_);
      return hyperbola_region(d.variant, d.a, d.b, d.c).f() == f_;
    }
    case PrimitiveKind::ellipsoid_body:
    case PrimitiveKind::ellipsoid_hole: {
      const auto& d = std::get<EllipsoidData>(data_);
      return ellipsoid(d.center, d.squared_semi_axes, kind_ == PrimitiveKind::ellipsoid_hole).f() == f_;
    }
    case PrimitiveKind::cylinder: {
      const auto& d = std::get<CylinderData>(data_);
      return d.base->metadata_consistent() && d.base->f().remap(dim(), d.axes) == f_;
    }
    case PrimitiveKind::generic: return true;
  }
  return false;
}

std::vector<ComponentDescriptor> Primitive::other_components() const {
  if (kind_ == PrimitiveKind::hyperbola_region) return {std::get<HyperbolaData>(data_).minus_branch};
  if (kind_ == PrimitiveKind::cylinder) {
    const auto& d = std::get<CylinderData>(data_);
    std::vector<ComponentDescriptor> out;
    for (const auto& c : d.base->other_components()) out.push_back(remap_descriptor(c, dim(), d.axes));
    return out;
  }
  return {};
}

Primitive half_plane(const Point2& p1, const Point2& p2, Side side) {
  if (p1 == p2) throw InputError("half_plane needs two distinct points");
  Polynomial f(2);
  if (p1[0] == p2[0]) {
    f = var(2, 0) - cst(2, p1[0]);
  } else {
    Rational slope = (p2[1] - p1[1]) / (p2[0] - p1[0]);
    Rational intercept = p1[1] - slope * p1[0];
    f = var(2, 1) - slope * var(2, 0) - cst(2, intercept);
  }
  if (side == Side::minus) f = -f;
  // Stepping along the (constant) gradient from a point of the line gives f = |grad|^2 > 0.
  RationalVector witness{p1[0] + f.coefficient({1, 0}), p1[1] + f.coefficient({0, 1})};
  return Primitive(PrimitiveKind::half_plane, std::move(f), {}, HalfPlaneData{p1, p2, side}, std::move(witness));
}

Primitive hyperbola_region(HyperbolaVariant variant, const Rational& a, const Rational& b, const Rational& c) {
  const bool left = variant == HyperbolaVariant::left_ray;
  if (left && c <= 0) throw InputError("hyperbola (-inf, a] variant requires c > 0");
  if (!left && c >= 0) throw InputError("hyperbola [a, inf) variant requires c < 0");
  Polynomial u = var(2, 0) - cst(2, a);
  Polynomial v = var(2, 1) - cst(2, b);
  Polynomial product = u * v;
  Polynomial f = left ? cst(2, c) - product : product - cst(2, c);

  HyperbolaData data{variant, a, b, c, {}, {}};
  if (left) {
    data.plus_branch.conditions = {{u, true}, {v, true}};
    data.minus_branch.conditions = {{u, false}, {v, false}};
  } else {
    data.plus_branch.conditions = {{u, false}, {v, true}};
    data.minus_branch.conditions = {{u, true}, {v, false}};
  }
  ComponentDescriptor component = data.plus_branch;
  return Primitive(PrimitiveKind::hyperbola_region, std::move(f), std::move(component), std::move(data),
                   RationalVector{a, b});
}

Primitive ellipsoid(const RationalVector& center, const RationalVector& squared_semi_axes, bool hole) {
  const std::size_t k = center.size();
  if (k == 0 || squared_semi_axes.size() != k) throw InputError("ellipsoid center and axes must match");
  for (const auto& r : squared_semi_axes) {
    if (r <= 0) throw InputError("ellipsoid squared semi-axes must be positive");
  }
  Polynomial f = cst(k, 1);
  for (std::size_t j = 0; j < k; ++j) {
    Polynomial d = var(k, j) - cst(k, center[j]);
    f -= (d * d) * Rational(1 / squared_semi_axes[j]);
  }
  RationalVector witness = center;
  if (hole) {
    f = -f;
    witness[0] += squared_semi_axes[0] + 1;
  }
  return Primitive(hole ? PrimitiveKind::ellipsoid_hole : PrimitiveKind::ellipsoid_body, std::move(f), {},
                   EllipsoidData{center, squared_semi_axes}, std::move(witness));
}

Primitive embed(const Primitive& prim, std::size_t n, std::vector<std::size_t> axes) {
  if (axes.size() != prim.dim()) throw InputError("embed needs one axis per base coordinate");
  if (n < prim.dim()) throw InputError("embedding dimension smaller than the primitive's");
  if (n == prim.dim() && is_identity(axes)) return prim;
  Polynomial f = prim.f().remap(n, axes);
  ComponentDescriptor component = remap_descriptor(prim.component(), n, axes);
  RationalVector witness(n, Rational(0));
  for (std::size_t i = 0; i < axes.size(); ++i) witness[axes[i]] = prim.witness()[i];
  CylinderData data{axes, std::make_shared<const Primitive>(prim)};
  return Primitive(PrimitiveKind::cylinder, std::move(f), std::move(component), std::move(data), std::move(witness));
}

Primitive embed_plane_primitive(const Primitive& prim, std::size_t n, std::size_t coord) {
  if (prim.dim() != 2) throw InputError("embed_plane_primitive expects a planar primitive");
  if (n < 2) throw InputError("ambient dimension must be at least 2");
  if (coord == 0) throw InputError("the function coordinate x1 is never remapped");
  if (coord >= n) throw InputError("target coordinate out of range");
  return embed(prim, n, {0, coord});
}

Primitive generic_primitive(Polynomial f, RationalVector witness, ComponentDescriptor component) {
  return Primitive(PrimitiveKind::generic, std::move(f), std::move(component), GenericData{}, std::move(witness));
}

std::vector<Primitive> region_R(RegionKind kind, const RationalVector& s1, const Rational& s2, const Rational& s) {
  if (s <= 0) throw InputError("region parameter s must be positive");
  const std::size_t expected = kind == RegionKind::flat ? 2 : 3;
  if (s1.size() != expected) throw InputError("region needs " + std::to_string(expected) + " abscissae");
  for (std::size_t i = 1; i < s1.size(); ++i) {
    if (!(s1[i - 1] < s1[i])) throw InputError("region abscissae must be strictly increasing");
  }
  const Rational zero = 0, one = 1;
  switch (kind) {
    case RegionKind::plus: {
      if (s2 <= 0) throw InputError("region parameter s2 must be positive");
      // (s13, s2) must lie on (x1 - s12) x2 = s.
      Rational residual = (s1[2] - s1[1]) * s2 - s;
      if (residual != 0) {
        throw InputError("R_plus incidence violated: (s13 - s12) * s2 - s = " + to_string(residual));
      }
      return {half_plane({s1[0], zero}, {s1[0], one}, Side::plus),
              half_plane({s1[0], zero}, {s1[1], zero}, Side::plus),
              half_plane({s1[1], zero}, {s1[2], s2}, Side::plus),
              hyperbola_region(HyperbolaVariant::left_ray, s1[1], zero, s)};
    }
    case RegionKind::minus: {
      if (s2 <= 0) throw InputError("region parameter s2 must be positive");
      // (s11, s2) must lie on (x1 - s12) x2 = -s.
      Rational residual = (s1[0] - s1[1]) * s2 + s;
      if (residual != 0) {
        throw InputError("R_minus incidence violated: (s11 - s12) * s2 + s = " + to_string(residual));
      }
      return {half_plane({s1[2], zero}, {s1[2], one}, Side::minus),
              half_plane({s1[1], zero}, {s1[2], zero}, Side::plus),
              half_plane({s1[1], zero}, {s1[0], s2}, Side::plus),
              hyperbola_region(HyperbolaVariant::right_ray, s1[1], zero, -s)};
    }
    case RegionKind::flat:
      return {half_plane({s1[0], zero}, {s1[1], zero}, Side::plus),
              hyperbola_region(HyperbolaVariant::right_ray, s1[0], zero, -s),
              hyperbola_region(HyperbolaVariant::left_ray, s1[1], zero, s)};
  }
  throw InputError("unknown region kind");
}

}  // namespace ncd
