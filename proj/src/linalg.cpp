#include "ncd/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace ncd {

namespace {

Eigen::MatrixXd to_eigen(const DoubleMatrix& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

std::size_t exact_rank(const RationalMatrix& rows) {
  RationalMatrix m = rows;
  if (m.empty()) return 0;
  const std::size_t cols = m.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][c] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Rational factor = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= factor * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

bool exact_in_row_span(const RationalMatrix& rows, const RationalVector& v) {
  RationalMatrix with = rows;
  with.push_back(v);
  return exact_rank(with) == exact_rank(rows);
}

RationalMatrix exact_inverse(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix a = m;
  RationalMatrix inv(n, RationalVector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw InputError("matrix is not square");
    inv[i][i] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) throw InputError("matrix is singular");
    std::swap(a[pivot], a[c]);
    std::swap(inv[pivot], inv[c]);
    Rational scale = 1 / a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] *= scale;
      inv[c][k] *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational factor = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= factor * a[c][k];
        inv[r][k] -= factor * inv[c][k];
      }
    }
  }
  return inv;
}

RankReport numerical_rank(const DoubleMatrix& rows, double rel_tol) {
  RankReport report;
  report.rows = rows.size();
  if (rows.empty()) return report;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(rows));
  const auto& s = svd.singularValues();
  if (s.size() == 0) return report;
  report.largest_singular = s(0);
  report.smallest_singular = s(s.size() - 1);
  report.ratio = s(0) > 0 ? s(s.size() - 1) / s(0) : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(0) > 0 && s(i) > rel_tol * s(0)) ++report.rank;
  }
  return report;
}

double span_residual(const DoubleMatrix& rows, const std::vector<double>& v) {
  Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  double norm = target.norm();
  if (norm == 0.0) return 0.0;
  if (rows.empty()) return 1.0;
  Eigen::MatrixXd a = to_eigen(rows).transpose();  // columns span the row space
  Eigen::VectorXd coeffs = a.completeOrthogonalDecomposition().solve(target);
  return (a * coeffs - target).norm() / norm;
}

std::vector<double> damped_min_norm_step(const DoubleMatrix& jac, const std::vector<double>& residual,
                                         double mu) {
  Eigen::MatrixXd j = to_eigen(jac);
  Eigen::VectorXd r =
      Eigen::Map<const Eigen::VectorXd>(residual.data(), static_cast<Eigen::Index>(residual.size()));
  Eigen::MatrixXd jjt = j * j.transpose();
  jjt.diagonal().array() += mu;
  Eigen::VectorXd w = jjt.ldlt().solve(r);
  Eigen::VectorXd step = j.transpose() * w;
  return std::vector<double>(step.data(), step.data() + step.size());
}

}  // namespace ncd
