#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ncd {

/// Exact rational number. mpq_class keeps the canonical form (positive
/// denominator, coprime parts) after every arithmetic operation.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Raised when an operation's precondition is violated by its caller.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "7", "-3/4" or a finite decimal such as "0.125" or "-2.5e-1".
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);
std::vector<double> to_doubles(const RationalVector& v);

/// Exact square root when r is the square of a rational.
bool exact_sqrt(const Rational& r, Rational& root);

/// Smallest-effort rational q >= 0 with q^2 >= r (exact root when r is a square).
Rational sqrt_upper_bound(const Rational& r);

/// Best rational approximation with denominator <= max_den (continued fractions).
Rational approximate(double value, long max_den);

/// Comma separated list of rationals, e.g. "0,1/2,3".
RationalVector parse_rational_list(std::string_view text);

}  // namespace ncd
