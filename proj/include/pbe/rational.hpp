#ifndef PBE_RATIONAL_HPP
#define PBE_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pbe {

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
using Rational = mpq_class;
using Integer = mpz_class;

Rational make_rational(long num, long den = 1);

/// Accepts "p", "p/q" and finite decimals such as "-0.04" or "1e-3"
/// (converted exactly). Throws Error{Parse} on anything else.
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "1/1", "-3/4".
std::string to_string(const Rational& value);

/// Nearest double (ties resolved toward zero).
double to_double(const Rational& value);

/// Nearest double plus the rounding residual, for double-double evaluation.
struct SplitDouble {
  double hi;
  double lo;
};
SplitDouble split_double(const Rational& value);

Integer factorial(unsigned n);

}  // namespace pbe

#endif  // PBE_RATIONAL_HPP
