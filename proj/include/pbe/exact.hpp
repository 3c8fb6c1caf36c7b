#ifndef PBE_EXACT_HPP
#define PBE_EXACT_HPP

#include <functional>
#include <optional>
#include <string_view>
#include <variant>

#include "pbe/rational.hpp"

namespace pbe {

/// Constant kernel, u0 = e^{-x}:  u = 4/(2+t)^2 exp(-2x/(2+t)).
struct ConstKernelExp {};
/// Sum kernel, u0 = e^{-x}: closed form through I_1.
struct SumKernelExp {};
/// Product kernel, u0 = e^{-x}: power series in t x^3.
struct ProductKernelExp {};
/// Bivariate constant kernel with
/// u0 = (p1+1)^{p1+1} (p2+1)^{p2+1} N0 / (m1 m2 G(p1+1) G(p2+1))
///      (x/m1)^{p1} (y/m2)^{p2} exp(-(p1+1)x/m1 - (p2+1)y/m2).
struct BivariateConst {
  Rational n0{1};
  Rational m1{1, 25};
  Rational m2{1, 25};
  Rational p1{1};
  Rational p2{1};
};
/// Binary breakage B = 2/y, S(x) = x, u0 = e^{-x}: u = (1+t)^2 exp(-x(1+t)).
struct FragLinearExp {};

using ExactSolution = std::variant<ConstKernelExp, SumKernelExp, ProductKernelExp, BivariateConst, FragLinearExp>;

std::string_view name(const ExactSolution& sol);
bool is_bivariate(const ExactSolution& sol);

/// Modified Bessel function I_1 by its power series, summed until a term is
/// below 1e-16 of the partial sum (at most 200 terms). Above z = 60 the
/// large-argument expansion is used instead.
double bessel_i1(double z);

/// Pointwise density. Series-form solutions are summed with the same 1e-16
/// relative rule and throw NonConvergence when the 200-term cap is reached.
/// `y` is required for BivariateConst and ignored otherwise.
double eval_exact(const ExactSolution& sol, double x, std::optional<double> y, double t);

using MomentFunction = std::function<double(double t)>;

/// mu_j(t) = \int x^j u dx (for BivariateConst, the mixed moment mu_{j,0}).
/// ConstKernelExp, FragLinearExp and SumKernelExp use closed forms;
/// ProductKernelExp and BivariateConst integrate their series term by term.
MomentFunction exact_moment(const ExactSolution& sol, unsigned j);

}  // namespace pbe

#endif  // PBE_EXACT_HPP
