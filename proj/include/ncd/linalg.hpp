#pragma once

#include <cstddef>
#include <vector>

#include "ncd/rational.hpp"

namespace ncd {

using RationalMatrix = std::vector<RationalVector>;
using DoubleMatrix = std::vector<std::vector<double>>;

/// Rank by exact Gaussian elimination.
std::size_t exact_rank(const RationalMatrix& rows);

/// True when v lies in the span of the given rows (exact).
bool exact_in_row_span(const RationalMatrix& rows, const RationalVector& v);

/// Inverse of a square matrix; throws InputError when singular.
RationalMatrix exact_inverse(const RationalMatrix& m);

struct RankReport {
  std::size_t rows = 0;
  std::size_t rank = 0;
  double largest_singular = 0.0;
  double smallest_singular = 0.0;
  /// smallest / largest over the min(rows, cols) singular values.
  double ratio = 0.0;
};

/// Numerical rank: singular values above rel_tol * largest count.
RankReport numerical_rank(const DoubleMatrix& rows, double rel_tol);

/// Relative least-squares residual |v - P v| / |v| of projecting v onto the row span.
double span_residual(const DoubleMatrix& rows, const std::vector<double>& v);

/// Minimum-norm damped Gauss-Newton step: J^T (J J^T + mu I)^{-1} r.
std::vector<double> damped_min_norm_step(const DoubleMatrix& jac, const std::vector<double>& residual,
                                         double mu);

}  // namespace ncd
