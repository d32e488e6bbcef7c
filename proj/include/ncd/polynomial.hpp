#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ncd/rational.hpp"

namespace ncd {

using Exponent = std::vector<std::uint32_t>;
using RationalMatrix = std::vector<RationalVector>;

/// Graded-lexicographic order: total degree first, then lexicographic on the
/// exponent vector with x1 most significant. The term map is stored in
/// ascending order; printing walks it in reverse so the leading term comes first.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Variables are addressed by 0-based index; the text form names them x1..xk.
/// Values are immutable in spirit: every operation returns a new polynomial.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GradedLex>;

  explicit Polynomial(std::size_t num_vars = 1);

  static Polynomial constant(std::size_t num_vars, const Rational& c);
  static Polynomial variable(std::size_t num_vars, std::size_t index);
  /// Affine form c0 + sum_i coeffs[i] * x_i.
  static Polynomial affine(const RationalVector& coeffs, const Rational& c0);

  std::size_t num_vars() const { return num_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Maximum total degree, -1 for the zero polynomial.
  int degree() const;
  Rational coefficient(const Exponent& e) const;
  /// Indices of variables that occur with a nonzero exponent.
  std::vector<std::size_t> support() const;

  /// Adds c * x^e, dropping the term if the result cancels.
  void add_term(const Exponent& e, const Rational& c);

  Rational eval(std::span<const Rational> x) const;
  /// Double precision twin of eval; terms are summed in graded-lex order.
  double eval(std::span<const double> x) const;

  Polynomial partial(std::size_t i) const;
  std::vector<Polynomial> gradient() const;

  /// p o T with T(x) = A x + b. A must be square and invertible.
  Polynomial affine_subst(const RationalMatrix& A, const RationalVector& b) const;
  /// Replaces x_i by images[i]; all images share the result's variable count.
  Polynomial compose(const std::vector<Polynomial>& images) const;
  /// Re-indexes variable i to var_map[i] in a polynomial of new_num_vars variables.
  Polynomial remap(std::size_t new_num_vars, std::span<const std::size_t> var_map) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  Polynomial& operator*=(const Rational& c);
  Polynomial pow(unsigned k) const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  /// Canonical text, e.g. "-x1^2 - x2^2 + 1". Parses back to an equal polynomial.
  std::string to_string() const;
  /// Grammar: variables x1..xk, integer or p/q literals, + - * ^ and parentheses.
  static Polynomial parse(std::string_view text, std::size_t num_vars);

 private:
  void check_same_space(const Polynomial& q) const;

  std::size_t num_vars_;
  TermMap terms_;
};

/// Flattened double-precision evaluator for the sampling hot paths.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  double operator()(std::span<const double> x) const;
  /// Gradient written into grad (size num_vars).
  void gradient(std::span<const double> x, std::span<double> grad) const;
  /// Coefficients c_0..c_d of s -> p(x + s dir), lowest degree first.
  std::vector<double> line_coefficients(std::span<const double> x, std::span<const double> dir) const;
  std::size_t num_vars() const { return num_vars_; }
  int degree() const { return degree_; }

 private:
  struct Factor {
    std::uint32_t var;
    std::uint32_t power;
  };
  struct Term {
    double coef;
    std::uint32_t first;
    std::uint32_t count;
  };
  std::size_t num_vars_ = 0;
  int degree_ = -1;
  std::vector<Term> terms_;
  std::vector<Factor> factors_;
};

}  // namespace ncd
