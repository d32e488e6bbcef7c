#pragma once

#include <string>
#include <vector>

#include "ncd/arrangement.hpp"

namespace ncd {

enum class Variant { mt2, mt3 };
std::string to_string(Variant v);
Variant parse_variant(const std::string& text);

struct ConstructionInput {
  RationalVector t;
  std::vector<int> labels;  // labels[j] for the interval (t[j], t[j+1])
  Variant variant = Variant::mt2;
  Rational strip_half_width = 1;
  Rational hole_shrink = Rational(1, 4);
};

/// Throws InputError naming the violated precondition.
void validate(const ConstructionInput& in);

/// The domain realizing the requested labels: bounded slices over label-0
/// intervals, unbounded ones over label-1 intervals, critical values exactly t.
Arrangement build(const ConstructionInput& in);

Profile predicted_profile(const ConstructionInput& in);

struct HoleGeometry {
  RationalVector center;
  RationalVector squared_semi_axes;
  double margin = 0.0;  // largest admissible minor semi-axis found by the search
};

struct HoleRequest {
  Rational x1_lo, x1_hi;       // pole abscissae
  RationalVector preferred;    // full center; preferred[0] is ignored
  double half_width = 12.0;    // search range for the free coordinates
  Rational grid_step = Rational(1, 8);
};

/// Center and axes of a hole spanning [x1_lo, x1_hi] in x1 that stays strictly inside
/// every fixed primitive and is separated from the holes already placed.
HoleGeometry choose_hole_geometry(const std::vector<Primitive>& fixed, const std::vector<HoleGeometry>& placed,
                                  std::size_t n, const HoleRequest& request, const Rational& shrink);

}  // namespace ncd
