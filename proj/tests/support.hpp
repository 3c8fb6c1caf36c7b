#ifndef PBE_TESTS_SUPPORT_HPP
#define PBE_TESTS_SUPPORT_HPP

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <random>

#include "pbe/exact.hpp"
#include "pbe/polyexp.hpp"
#include "pbe/problems.hpp"
#include "pbe/rational.hpp"

namespace pbe::test {

inline Rational q(long num, long den = 1) { return make_rational(num, den); }

/// c x^i t^j e^{-a x}
inline PolyExp1D term(const Rational& c, std::uint32_t i, std::uint32_t j, const Rational& a) {
  return PolyExp1D::monomial(c, {i, j}, {a});
}

/// c x^i y^k t^j e^{-a x - b y}
inline PolyExp2D term2(const Rational& c, std::uint32_t i, std::uint32_t k, std::uint32_t j, const Rational& a,
                       const Rational& b) {
  return PolyExp2D::monomial(c, {i, k, j}, {a, b});
}

/// e^{-a x} times a polynomial in x given by coefficients (lowest first), times t^j.
inline PolyExp1D poly_exp(const std::vector<Rational>& coeffs, std::uint32_t j, const Rational& a) {
  PolyExpBuilder<1> b;
  for (std::size_t i = 0; i < coeffs.size(); ++i) b.add({a}, {static_cast<std::uint32_t>(i), j}, coeffs[i]);
  return std::move(b).build();
}

/// Random single-rate function with x-degree <= max_degree, t-degree <= 2.
inline PolyExp1D random_single_rate(std::mt19937& rng, const Rational& rate, unsigned max_degree) {
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), deg(0, static_cast<int>(max_degree)), tdeg(0, 2);
  PolyExpBuilder<1> b;
  const int count = deg(rng) + 1;
  for (int k = 0; k < count; ++k) {
    b.add({rate}, {static_cast<std::uint32_t>(deg(rng)), static_cast<std::uint32_t>(tdeg(rng))}, q(num(rng), den(rng)));
  }
  return std::move(b).build();
}

using Float50 = boost::multiprecision::cpp_bin_float_50;

inline Float50 to_float50(const Rational& r) {
  return Float50(r.get_num().get_str()) / Float50(r.get_den().get_str());
}

/// High-precision evaluation used as an oracle for Evaluator.
inline Float50 evaluate50(const PolyExp1D& f, const Float50& x, const Float50& t) {
  Float50 total = 0;
  for (const auto& [rate, poly] : f.terms()) {
    Float50 block = 0;
    for (const auto& [powers, c] : poly) block += to_float50(c) * pow(x, powers[0]) * pow(t, powers[1]);
    total += block * exp(-to_float50(rate[0]) * x);
  }
  return total;
}

template <class F>
double quad(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

inline const PolyExp1D& unit_exp() {
  static const PolyExp1D f = term(1, 0, 0, 1);
  return f;
}

// Initial data and problems of the worked examples.
inline ProblemSpec example_const() { return Coag1D{CoagKernel::Constant, unit_exp()}; }
inline ProblemSpec example_sum() { return Coag1D{CoagKernel::Sum, unit_exp()}; }
inline ProblemSpec example_product() { return Coag1D{CoagKernel::Product, unit_exp()}; }
inline ProblemSpec example_ccfe_slow() {
  return CCFE{CoagKernel::Constant, FragSpec::binary(q(1, 2)), term(4, 1, 0, 2)};
}
inline ProblemSpec example_ccfe_fast() { return CCFE{CoagKernel::Constant, FragSpec::binary(2), term(32, 1, 0, 4)}; }
inline ProblemSpec example_bivariate() { return Coag2D{term2(6250000, 1, 1, 0, 50, 50)}; }
inline ProblemSpec example_frag() { return Frag{FragSpec::binary(1), unit_exp()}; }

inline std::vector<ProblemSpec> all_1d_examples() {
  return {example_const(), example_sum(), example_product(), example_ccfe_slow(), example_ccfe_fast(), example_frag()};
}

}  // namespace pbe::test

#endif  // PBE_TESTS_SUPPORT_HPP
