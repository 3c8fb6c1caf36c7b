#ifndef PBE_TESTS_PRINTED_HPP
#define PBE_TESTS_PRINTED_HPP

// Published series components, written in their factored form with PolyExp
// arithmetic (mul and add only) so they can be compared structurally.

#include "pbe/polyexp.hpp"
#include "support.hpp"

namespace pbe::test::printed {

inline PolyExp1D X() { return term(1, 1, 0, 0); }
inline PolyExp1D T() { return term(1, 0, 1, 0); }
inline PolyExp1D C(const Rational& c) { return PolyExp1D::constant(c); }
inline PolyExp1D E(const Rational& a) { return term(1, 0, 0, a); }

inline PolyExp1D pw(const PolyExp1D& f, unsigned n) {
  PolyExp1D out = C(1);
  for (unsigned i = 0; i < n; ++i) out = out * f;
  return out;
}

inline PolyExp1D operator+(const PolyExp1D& f, long c) { return f + C(c); }
inline PolyExp1D operator-(const PolyExp1D& f, long c) { return f - C(c); }
inline PolyExp1D operator-(long c, const PolyExp1D& f) { return C(c) - f; }
inline PolyExp1D operator*(long c, const PolyExp1D& f) { return scale(f, Rational(c)); }

// Constant kernel, u0 = e^{-x}.
inline PolyExp1D const_v1() { return q(1, 2) * T() * E(1) * (X() - 2); }

inline PolyExp1D const_v2() {
  const auto x = X(), t = T();
  return pw(t, 3) * (q(1, 144) * pw(x, 3) - q(1, 12) * pw(x, 2) + q(1, 4) * x - C(q(1, 6))) * E(1) +
         pw(t, 2) * (q(1, 8) * pw(x, 2) - q(3, 4) * x + C(q(3, 4))) * E(1);
}

inline PolyExp1D const_v3() {
  const auto x = X(), t = T();
  const auto inner =
      pw(t, 4) * pw(x, 7) + 14 * pw(t, 3) * (7 - 4 * t) * pw(x, 6) + 588 * (t - 2) * pw(t, 2) * (2 * t - 3) * pw(x, 5) -
      2940 * t * (t * (t * (4 * t - 21) + 36) - 24) * pw(x, 4) +
      11760 * (5 * (t - 4) * t * ((t - 3) * t + 6) + 48) * pw(x, 3) -
      35280 * (t * (t * (t * (4 * t - 35) + 120) - 240) + 192) * pw(x, 2) +
      70560 * (t * (t * (t * (2 * t - 21) + 90) - 240) + 288) * x -
      10080 * (t * (t * (t * (4 * t - 49) + 252) - 840) + 1344);
  return q(1, 40642560) * pw(t, 3) * E(1) * inner;
}

// Sum kernel, u0 = e^{-x}.
inline PolyExp1D sum_v1() { return q(1, 2) * T() * E(1) * (pw(X(), 2) - 2 * X() - 2); }

inline PolyExp1D sum_v2() {
  const auto x = X(), t = T();
  return q(1, 720) * pw(t, 2) * E(1) *
         (t * x * (pw(x, 5) - 10 * pw(x, 4) - 20 * pw(x, 3) + 240 * pw(x, 2) - 120 * x - 240) + 60 * pw(x, 4) -
          360 * pw(x, 3) - 180 * pw(x, 2) + 1080 * x + 360);
}

// Product kernel, u0 = e^{-x}.
inline PolyExp1D product_v1() { return q(1, 12) * T() * E(1) * X() * (pw(X(), 2) - 12); }

inline PolyExp1D product_v2() {
  const auto x = X(), t = T();
  return q(1, 544320) * pw(t, 2) * E(1) * pw(x, 2) *
         (t * pw(x, 7) - 144 * t * pw(x, 5) + 3024 * t * pw(x, 3) + 756 * pw(x, 4) - 45360 * pw(x, 2) + 272160);
}

// Constant kernel with binary breakage, S = x/2, u0 = 4x e^{-2x}.
inline PolyExp1D ccfe_slow_v1() {
  const auto x = X();
  return q(1, 3) * T() * E(2) * (4 * pw(x, 3) - 6 * pw(x, 2) - 6 * x + 3);
}

inline PolyExp1D ccfe_slow_v2() {
  const auto x = X(), t = T();
  return q(1, 3780) * pw(t, 2) * E(2) *
         (8 * t * pw(x, 7) - 56 * t * pw(x, 6) - 84 * t * pw(x, 5) + 840 * t * pw(x, 4) - 420 * t * pw(x, 3) -
          1260 * t * pw(x, 2) + 630 * t * x + 504 * pw(x, 5) - 2520 * pw(x, 4) - 1890 * pw(x, 3) + 9450 * pw(x, 2) +
          945 * x - 1890);
}

// Constant kernel with binary breakage, S = 2x, u0 = 32x e^{-4x}.
inline PolyExp1D ccfe_fast_v1() {
  const auto x = X();
  return q(8, 3) * T() * E(4) * (32 * pw(x, 3) - 24 * pw(x, 2) - 12 * x + 3);
}

inline PolyExp1D ccfe_fast_v2() {
  const auto x = X(), t = T();
  return q(8, 945) * pw(t, 2) * E(4) *
         (1024 * t * pw(x, 7) - 3584 * t * pw(x, 6) - 2688 * t * pw(x, 5) + 13440 * t * pw(x, 4) -
          3360 * t * pw(x, 3) - 5040 * t * pw(x, 2) + 1260 * t * x + 8064 * pw(x, 5) - 20160 * pw(x, 4) -
          7560 * pw(x, 3) + 18900 * pw(x, 2) + 945 * x - 945);
}

// Bivariate constant kernel: v1 = 5.42535e11 t x y e^{-50x-50y} (x^2 y^2 - 0.1152e-4).
inline constexpr const char* kBivariateV1Digits = "5.42535e11";
inline constexpr const char* kBivariateV1Offset = "0.1152e-4";

}  // namespace pbe::test::printed

#endif  // PBE_TESTS_PRINTED_HPP
