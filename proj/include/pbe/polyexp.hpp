#ifndef PBE_POLYEXP_HPP
#define PBE_POLYEXP_HPP

// Exact algebra over sums of  c * x^i [y^k] t^j * exp(-a x [- b y])  with
// rational c and a, b >= 0. The class is closed under the convolution, tail
// integral, moment and time-integration operators used by the series
// iterations, so every component can be carried symbolically.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "pbe/rational.hpp"

namespace pbe {

inline constexpr unsigned kDefaultMaxExponent = 512;

/// Exponent cap applied by every operation that raises a degree. The cap is
/// thread-local; ExponentCapGuard changes it for a scope.
unsigned exponent_cap() noexcept;

class ExponentCapGuard {
 public:
  explicit ExponentCapGuard(unsigned cap) noexcept;
  ~ExponentCapGuard();
  ExponentCapGuard(const ExponentCapGuard&) = delete;
  ExponentCapGuard& operator=(const ExponentCapGuard&) = delete;

 private:
  unsigned previous_;
};

/// Polynomial in t with rational coefficients; coefficient i multiplies t^i.
class TimePoly {
 public:
  TimePoly() = default;
  explicit TimePoly(std::vector<Rational> coefficients);
  static TimePoly constant(const Rational& c);

  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coefficient(std::size_t power) const;
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double evaluate(double t) const;

  friend TimePoly operator+(const TimePoly& a, const TimePoly& b);
  friend TimePoly operator-(const TimePoly& a, const TimePoly& b);
  friend TimePoly operator*(const TimePoly& a, const TimePoly& b);
  friend TimePoly operator*(const Rational& c, const TimePoly& a);
  friend bool operator==(const TimePoly& a, const TimePoly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

template <std::size_t Dim>
class PolyExpBuilder;

/// Canonical sparse polynomial-exponential function in Dim spatial
/// variables and time. Rates and monomials are kept in ordered maps and zero
/// coefficients are never stored, so structural equality is mathematical
/// equality.
template <std::size_t Dim>
class PolyExp {
  static_assert(Dim == 1 || Dim == 2);

 public:
  static constexpr std::size_t kDim = Dim;
  static constexpr std::size_t kTimeIndex = Dim;

  /// Decay rates, one per spatial variable.
  using Rate = std::array<Rational, Dim>;
  /// Spatial exponents followed by the time exponent.
  using Exponents = std::array<std::uint32_t, Dim + 1>;
  using Polynomial = std::map<Exponents, Rational>;
  using TermMap = std::map<Rate, Polynomial>;

  PolyExp() = default;

  static PolyExp monomial(const Rational& coeff, const Exponents& powers, const Rate& rate);
  static PolyExp constant(const Rational& c);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const;
  /// Largest exponent of variable `index` (Dim means t); 0 for the zero function.
  std::uint32_t degree(std::size_t index) const;
  std::uint32_t t_degree() const { return degree(kTimeIndex); }
  /// Smallest t exponent present; 0 for the zero function.
  std::uint32_t t_order() const;
  bool single_rate() const { return terms_.size() <= 1; }

  friend bool operator==(const PolyExp&, const PolyExp&) = default;

 private:
  friend class PolyExpBuilder<Dim>;
  explicit PolyExp(TermMap terms) : terms_(std::move(terms)) {}
  TermMap terms_;
};

using PolyExp1D = PolyExp<1>;
using PolyExp2D = PolyExp<2>;

/// Accumulates terms (combining equal monomials) and emits a canonical
/// PolyExp. Exponents above exponent_cap() raise DegreeOverflow; negative
/// rates raise InvalidSpec.
template <std::size_t Dim>
class PolyExpBuilder {
 public:
  using Rate = typename PolyExp<Dim>::Rate;
  using Exponents = typename PolyExp<Dim>::Exponents;

  PolyExpBuilder& add(const Rate& rate, const Exponents& powers, const Rational& coeff);
  PolyExpBuilder& add(const PolyExp<Dim>& f, const Rational& scale = 1);
  PolyExp<Dim> build() &&;

 private:
  typename PolyExp<Dim>::TermMap terms_;
};

// Linear structure.
template <std::size_t Dim>
PolyExp<Dim> add(const PolyExp<Dim>& f, const PolyExp<Dim>& g);
template <std::size_t Dim>
PolyExp<Dim> sub(const PolyExp<Dim>& f, const PolyExp<Dim>& g);
template <std::size_t Dim>
PolyExp<Dim> scale(const PolyExp<Dim>& f, const Rational& c);

/// Pointwise product: rates add, polynomials multiply.
template <std::size_t Dim>
PolyExp<Dim> mul(const PolyExp<Dim>& f, const PolyExp<Dim>& g);
template <std::size_t Dim>
PolyExp<Dim> mul(const PolyExp<Dim>& f, const TimePoly& p);
/// Multiplies by x^px (1-D) or x^px y^py (2-D).
PolyExp1D shift_powers(const PolyExp1D& f, std::uint32_t px);
PolyExp2D shift_powers(const PolyExp2D& f, std::uint32_t px, std::uint32_t py);

template <std::size_t Dim>
PolyExp<Dim> operator+(const PolyExp<Dim>& f, const PolyExp<Dim>& g) { return add(f, g); }
template <std::size_t Dim>
PolyExp<Dim> operator-(const PolyExp<Dim>& f, const PolyExp<Dim>& g) { return sub(f, g); }
template <std::size_t Dim>
PolyExp<Dim> operator-(const PolyExp<Dim>& f) { return scale(f, Rational(-1)); }
template <std::size_t Dim>
PolyExp<Dim> operator*(const PolyExp<Dim>& f, const PolyExp<Dim>& g) { return mul(f, g); }
template <std::size_t Dim>
PolyExp<Dim> operator*(const Rational& c, const PolyExp<Dim>& f) { return scale(f, c); }

/// (f * g)(x) = \int_0^x f(x - y) g(y) dy. Term pairs must share the same
/// rate; otherwise throws MixedRates.
PolyExp1D convolve_x(const PolyExp1D& f, const PolyExp1D& g);
/// Double convolution over [0,x] x [0,y]; equal rate pairs required.
PolyExp2D convolve_xy(const PolyExp2D& f, const PolyExp2D& g);

/// \int_0^\infty x^j f dx as a polynomial in t. ZeroRate if any rate is 0.
TimePoly moment_full(const PolyExp1D& f, unsigned j);
/// \int\int x^i y^j f dx dy.
TimePoly moment2d(const PolyExp2D& f, unsigned i, unsigned j);

/// \int_x^\infty y^p f(y) dy, rewritten in the variable x.
/// OutOfClass if some monomial power m has m + p < 0; ZeroRate on a = 0.
PolyExp1D tail_integral(const PolyExp1D& f, int p);

/// \int_0^t f(., s) ds, monomial-wise t^j -> t^{j+1}/(j+1).
template <std::size_t Dim>
PolyExp<Dim> time_antiderivative(const PolyExp<Dim>& f);

/// Restriction to t = 0 (drops every monomial with a positive t power).
template <std::size_t Dim>
PolyExp<Dim> at_time_zero(const PolyExp<Dim>& f);

/// Floating evaluation. Coefficients are split into double-double pairs and
/// accumulated in long double, so the absolute error is bounded by roughly
///   (n + 2) * 2^-63 * sum_terms |c x^i t^j| e^{-a x}
/// for n monomials; relative accuracy degrades only through cancellation.
/// Build once with Evaluator and reuse it for grids; it is read-only after
/// construction and safe to share across threads.
template <std::size_t Dim>
class Evaluator {
 public:
  explicit Evaluator(const PolyExp<Dim>& f);

  double operator()(double x, double t) const requires(Dim == 1);
  double operator()(double x, double y, double t) const requires(Dim == 2);

 private:
  struct Term {
    std::array<std::uint32_t, Dim + 1> powers;
    long double coeff;
  };
  struct Block {
    std::array<long double, Dim> rate;
    std::array<std::uint32_t, Dim + 1> max_power{};
    std::vector<Term> terms;
  };
  long double sum_block(const Block& block, const std::array<long double, Dim + 1>& point) const;
  std::vector<Block> blocks_;
};

double evaluate(const PolyExp1D& f, double x, double t);
double evaluate(const PolyExp2D& f, double x, double y, double t);

}  // namespace pbe

#endif  // PBE_POLYEXP_HPP
