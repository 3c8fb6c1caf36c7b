#include "pbe/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pbe/error.hpp"

namespace pbe {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void fail(std::string_view text) {
  throw Error(ErrorKind::Parse, "not a rational number: '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text, std::string_view body) {
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = body.substr(e + 1);
    body = body.substr(0, e);
    bool negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6) fail(text);
    exponent = std::strtol(std::string(exp_part).c_str(), nullptr, 10);
    if (negative) exponent = -exponent;
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac))) {
      fail(text);
    }
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!all_digits(body)) fail(text);
    digits = std::string(body);
  }
  Rational value{Integer(digits, 10)};
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    value *= ten_pow;
  } else {
    value /= ten_pow;
  }
  value.canonicalize();
  return value;
}

}  // namespace

Rational make_rational(long num, long den) {
  if (den == 0) throw Error(ErrorKind::InvalidSpec, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
  while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) fail(text);

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    std::string_view num = body.substr(0, slash);
    std::string_view den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) fail(text);
    Integer d(std::string(den), 10);
    if (d == 0) fail(text);
    value = Rational(Integer(std::string(num), 10), d);
    value.canonicalize();
  } else if (all_digits(body)) {
    value = Rational(Integer(std::string(body), 10));
  } else {
    value = parse_decimal(text, body);
  }
  return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double to_double(const Rational& value) {
  // get_d truncates toward zero; step one ulp outward when that is closer.
  const double d = value.get_d();
  if (!std::isfinite(d) || value == d) return d;
  const double away = std::nextafter(d, value > d ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return d;
  const Rational gap = value - Rational(d);
  const Rational gap_away = Rational(away) - value;
  return abs(gap_away) < abs(gap) ? away : d;
}

SplitDouble split_double(const Rational& value) {
  const double hi = to_double(value);
  if (!std::isfinite(hi)) return {hi, 0.0};
  Rational residual = value - Rational(hi);
  return {hi, residual.get_d()};
}

Integer factorial(unsigned n) {
  Integer result;
  mpz_fac_ui(result.get_mpz_t(), n);
  return result;
}

}  // namespace pbe
