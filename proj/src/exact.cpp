#include "pbe/exact.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "pbe/error.hpp"

namespace pbe {

namespace {

constexpr double kRelTol = 1e-16;
constexpr int kMaxTerms = 200;
constexpr double kAsymptoticThreshold = 60.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void non_convergence(std::string_view what) {
  throw Error(ErrorKind::NonConvergence, std::string(what) + ": series did not reach tolerance within " +
                                             std::to_string(kMaxTerms) + " terms");
}

// sum_k (z/2)^{2k} / (k! (k+1)!) = I_1(z) / (z/2)
double i1_ratio_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < kRelTol * sum) return sum;
  }
  non_convergence("bessel_i1");
}

// e^{-z} I_1(z) from the large-argument expansion.
double i1_scaled_asymptotic(double z) {
  const double mu = 4.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * z);
    if (std::fabs(next) >= std::fabs(term)) break;
    term = next;
    sum += term;
    if (std::fabs(term) < kRelTol * std::fabs(sum)) break;
  }
  return sum / std::sqrt(2.0 * M_PI * z);
}

// a^e with 0^0 = 1, in log form so callers can combine huge and tiny factors.
double log_pow(double base, double e) {
  if (e == 0.0) return 0.0;
  if (base == 0.0) return -std::numeric_limits<double>::infinity();
  return e * std::log(base);
}

// Sums exp(log_term(k)) for k = 0, 1, ... with the 1e-16 relative stopping
// rule, applied only once the terms have started to decrease.
template <class LogTerm>
double sum_log_series(LogTerm log_term, std::string_view what) {
  double sum = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kMaxTerms; ++k) {
    const double term = std::exp(log_term(k));
    sum += term;
    const bool vanished = term == 0.0 && sum == 0.0 && k > 0;
    if (term <= previous && (term < kRelTol * sum || vanished)) return sum;
    previous = term;
  }
  non_convergence(what);
}

double eval_const(double x, double t) {
  const double s = 2.0 + t;
  return 4.0 / (s * s) * std::exp(-2.0 * x / s);
}

double eval_sum(double x, double t) {
  const double decay = std::exp(-t);
  const double s = std::sqrt(-std::expm1(-t));  // sqrt(1 - e^{-t})
  const double z = 2.0 * s * x;
  const double exponent = (decay - 2.0) * x - t;
  if (z <= kAsymptoticThreshold) return std::exp(exponent) * i1_ratio_series(z);
  return std::exp(exponent + z) * i1_scaled_asymptotic(z) / (s * x);
}

double eval_product(double x, double t) {
  return sum_log_series(
      [&](int k) {
        return log_pow(t, k) + log_pow(x, 3.0 * k) - (t + 1.0) * x - std::lgamma(k + 2.0) -
               std::lgamma(2.0 * k + 2.0);
      },
      "product-kernel solution");
}

struct BivariateParams {
  double n0, m1, m2, p1, p2;
  explicit BivariateParams(const BivariateConst& b)
      : n0(to_double(b.n0)), m1(to_double(b.m1)), m2(to_double(b.m2)), p1(to_double(b.p1)), p2(to_double(b.p2)) {}
  // log of (p1+1)^{p1+1} (p2+1)^{p2+1}
  double log_shape() const { return (p1 + 1.0) * std::log(p1 + 1.0) + (p2 + 1.0) * std::log(p2 + 1.0); }
};

double eval_bivariate(const BivariateConst& sol, double x, double y, double t) {
  const BivariateParams p(sol);
  const double shape = p.log_shape();
  const double ratio = t / (t + 2.0);
  const double prefactor = 4.0 * p.n0 / (p.m1 * p.m2 * (t + 2.0) * (t + 2.0)) * std::exp(shape) *
                           std::exp(-(p.p1 + 1.0) * x / p.m1 - (p.p2 + 1.0) * y / p.m2);
  const double series = sum_log_series(
      [&](int k) {
        const double a = (k + 1.0) * (p.p1 + 1.0);
        const double b = (k + 1.0) * (p.p2 + 1.0);
        return log_pow(ratio, k) + k * shape + log_pow(x / p.m1, a - 1.0) + log_pow(y / p.m2, b - 1.0) -
               std::lgamma(a) - std::lgamma(b);
      },
      "bivariate solution");
  return prefactor * series;
}

double factorial_d(unsigned j) { return std::tgamma(j + 1.0); }

MomentFunction numeric_moment(const ExactSolution& sol, unsigned j) {
  return [sol, j](double t) {
    auto integrand = [&](double x) { return std::pow(x, j) * eval_exact(sol, x, std::nullopt, t); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
  };
}

}  // namespace

std::string_view name(const ExactSolution& sol) {
  return std::visit(Overloaded{
                        [](const ConstKernelExp&) { return std::string_view("const-kernel"); },
                        [](const SumKernelExp&) { return std::string_view("sum-kernel"); },
                        [](const ProductKernelExp&) { return std::string_view("product-kernel"); },
                        [](const BivariateConst&) { return std::string_view("bivariate-const"); },
                        [](const FragLinearExp&) { return std::string_view("frag-linear"); },
                    },
                    sol);
}

bool is_bivariate(const ExactSolution& sol) { return std::holds_alternative<BivariateConst>(sol); }

double bessel_i1(double z) {
  if (z <= kAsymptoticThreshold) return 0.5 * z * i1_ratio_series(z);
  return std::exp(z) * i1_scaled_asymptotic(z);
}

double eval_exact(const ExactSolution& sol, double x, std::optional<double> y, double t) {
  if (t < 0 || x < 0) throw Error(ErrorKind::InvalidSpec, "exact solutions are defined for x, t >= 0");
  return std::visit(Overloaded{
                        [&](const ConstKernelExp&) { return eval_const(x, t); },
                        [&](const SumKernelExp&) { return eval_sum(x, t); },
                        [&](const ProductKernelExp&) { return eval_product(x, t); },
                        [&](const BivariateConst& b) {
                          if (!y || *y < 0) {
                            throw Error(ErrorKind::InvalidSpec, "bivariate solution needs y >= 0");
                          }
                          return eval_bivariate(b, x, *y, t);
                        },
                        [&](const FragLinearExp&) { return (1.0 + t) * (1.0 + t) * std::exp(-x * (1.0 + t)); },
                    },
                    sol);
}

MomentFunction exact_moment(const ExactSolution& sol, unsigned j) {
  return std::visit(
      Overloaded{
          [j](const ConstKernelExp&) -> MomentFunction {
            // 4/(2+t)^2 * j! ((2+t)/2)^{j+1}
            return [j](double t) { return factorial_d(j) * std::pow(0.5 * (2.0 + t), static_cast<double>(j) - 1.0); };
          },
          [j](const FragLinearExp&) -> MomentFunction {
            return [j](double t) { return factorial_d(j) * std::pow(1.0 + t, 1.0 - static_cast<double>(j)); };
          },
          [&sol, j](const SumKernelExp&) -> MomentFunction {
            // mu_0' = -mu_0 mu_1, mu_1 = 1, mu_2' = 2 mu_1 mu_2 with mu_j(0) = j!
            switch (j) {
              case 0: return [](double t) { return std::exp(-t); };
              case 1: return [](double) { return 1.0; };
              case 2: return [](double t) { return 2.0 * std::exp(2.0 * t); };
              default: return numeric_moment(sol, j);
            }
          },
          [j](const ProductKernelExp&) -> MomentFunction {
            // \int x^{3k+j} e^{-(t+1)x} dx = (3k+j)! / (t+1)^{3k+j+1}
            return [j](double t) {
              const double l1 = std::log1p(t);
              return sum_log_series(
                  [&](int k) {
                    return log_pow(t, k) + std::lgamma(3.0 * k + j + 1.0) - (3.0 * k + j + 1.0) * l1 -
                           std::lgamma(k + 2.0) - std::lgamma(2.0 * k + 2.0);
                  },
                  "product-kernel moment");
            };
          },
          [j](const BivariateConst& b) -> MomentFunction {
            const BivariateParams p(b);
            return [p, j](double t) {
              const double shape = p.log_shape();
              const double ratio = t / (t + 2.0);
              // \int\int x^j (x/m1)^{a-1} (y/m2)^{b-1} e^{-(p1+1)x/m1 - (p2+1)y/m2}
              //   = m1^{j+1} G(a+j) / (p1+1)^{a+j} * m2 G(b) / (p2+1)^b
              const double prefactor =
                  4.0 * p.n0 / (p.m1 * p.m2 * (t + 2.0) * (t + 2.0)) * std::exp(shape) * std::pow(p.m1, j + 1.0) * p.m2;
              const double series = sum_log_series(
                  [&](int k) {
                    const double a = (k + 1.0) * (p.p1 + 1.0);
                    const double bb = (k + 1.0) * (p.p2 + 1.0);
                    return log_pow(ratio, k) + k * shape + std::lgamma(a + j) - (a + j) * std::log(p.p1 + 1.0) +
                           std::lgamma(bb) - bb * std::log(p.p2 + 1.0) - std::lgamma(a) - std::lgamma(bb);
                  },
                  "bivariate moment");
              return prefactor * series;
            };
          },
      },
      sol);
}

}  // namespace pbe
