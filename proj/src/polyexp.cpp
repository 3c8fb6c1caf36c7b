#include "pbe/polyexp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "pbe/error.hpp"

namespace pbe {

namespace {

thread_local unsigned tl_exponent_cap = kDefaultMaxExponent;

template <std::size_t Dim>
std::string describe_rate(const typename PolyExp<Dim>::Rate& rate) {
  std::string s = "(";
  for (std::size_t d = 0; d < Dim; ++d) {
    if (d) s += ", ";
    s += rate[d].get_str();
  }
  return s + ")";
}

// Coefficients of one polynomial brought to a common denominator:
// c_i = numerators[i].second / denominator.
template <std::size_t Dim>
struct IntegerPoly {
  std::vector<std::pair<typename PolyExp<Dim>::Exponents, Integer>> numerators;
  Integer denominator{1};
};

// With `factorial_weight`, each coefficient is first multiplied by the
// factorials of its spatial exponents (the convolution weights).
template <std::size_t Dim>
IntegerPoly<Dim> integerize(const typename PolyExp<Dim>::Polynomial& poly, bool factorial_weight) {
  IntegerPoly<Dim> out;
  std::vector<std::pair<typename PolyExp<Dim>::Exponents, Rational>> scaled;
  scaled.reserve(poly.size());
  for (const auto& [powers, coeff] : poly) {
    Rational c = coeff;
    if (factorial_weight) {
      for (std::size_t d = 0; d < Dim; ++d) c *= factorial(powers[d]);
    }
    mpz_lcm(out.denominator.get_mpz_t(), out.denominator.get_mpz_t(), c.get_den_mpz_t());
    scaled.emplace_back(powers, std::move(c));
  }
  out.numerators.reserve(scaled.size());
  for (auto& [powers, c] : scaled) {
    Integer n = c.get_num() * (out.denominator / c.get_den());
    out.numerators.emplace_back(powers, std::move(n));
  }
  return out;
}

// Shared kernel of mul (rates add) and the convolutions (equal rates, the
// factorial-weighted product followed by division by (i+j+1)! per axis).
template <std::size_t Dim>
PolyExp<Dim> product_impl(const PolyExp<Dim>& f, const PolyExp<Dim>& g, bool convolve) {
  using Exponents = typename PolyExp<Dim>::Exponents;
  using Rate = typename PolyExp<Dim>::Rate;
  PolyExpBuilder<Dim> out;
  const unsigned cap = exponent_cap();
  for (const auto& [rate_f, poly_f] : f.terms()) {
    const IntegerPoly<Dim> nf = integerize<Dim>(poly_f, convolve);
    for (const auto& [rate_g, poly_g] : g.terms()) {
      Rate rate;
      if (convolve) {
        if (!(rate_f == rate_g)) {
          throw Error(ErrorKind::MixedRates, "convolution of rates " + describe_rate<Dim>(rate_f) +
                                                 " and " + describe_rate<Dim>(rate_g));
        }
        rate = rate_f;
      } else {
        for (std::size_t d = 0; d < Dim; ++d) rate[d] = rate_f[d] + rate_g[d];
      }
      const IntegerPoly<Dim> ng = integerize<Dim>(poly_g, convolve);
      std::map<Exponents, Integer> acc;
      for (const auto& [pf, cf] : nf.numerators) {
        for (const auto& [pg, cg] : ng.numerators) {
          Exponents e;
          for (std::size_t d = 0; d <= Dim; ++d) {
            const std::uint64_t sum = std::uint64_t{pf[d]} + pg[d] + ((convolve && d < Dim) ? 1u : 0u);
            if (sum > cap) {
              throw Error(ErrorKind::DegreeOverflow,
                          "exponent " + std::to_string(sum) + " exceeds cap " + std::to_string(cap));
            }
            e[d] = static_cast<std::uint32_t>(sum);
          }
          Integer& slot = acc[e];
          mpz_addmul(slot.get_mpz_t(), cf.get_mpz_t(), cg.get_mpz_t());
        }
      }
      const Integer denom = nf.denominator * ng.denominator;
      for (auto& [powers, num] : acc) {
        if (num == 0) continue;
        Integer d = denom;
        if (convolve) {
          for (std::size_t k = 0; k < Dim; ++k) d *= factorial(powers[k]);
        }
        Rational c(num, d);
        c.canonicalize();
        out.add(rate, powers, c);
      }
    }
  }
  return std::move(out).build();
}

Rational rational_pow(const Rational& base, unsigned exponent) {
  Rational result;
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  result.canonicalize();
  return result;
}

// \int_0^\infty x^n e^{-a x} dx = n! / a^{n+1}
Rational gamma_integral(unsigned n, const Rational& a) {
  return Rational(factorial(n)) / rational_pow(a, n + 1);
}

}  // namespace

unsigned exponent_cap() noexcept { return tl_exponent_cap; }

ExponentCapGuard::ExponentCapGuard(unsigned cap) noexcept : previous_(tl_exponent_cap) {
  tl_exponent_cap = cap;
}

ExponentCapGuard::~ExponentCapGuard() { tl_exponent_cap = previous_; }

// --- TimePoly ---------------------------------------------------------------

TimePoly::TimePoly(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

TimePoly TimePoly::constant(const Rational& c) { return TimePoly(std::vector<Rational>{c}); }

Rational TimePoly::coefficient(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : Rational(0);
}

double TimePoly::evaluate(double t) const {
  long double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    const SplitDouble c = split_double(*it);
    acc = acc * t + (static_cast<long double>(c.hi) + c.lo);
  }
  return static_cast<double>(acc);
}

void TimePoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

TimePoly operator+(const TimePoly& a, const TimePoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) + b.coefficient(i);
  return TimePoly(std::move(c));
}

TimePoly operator-(const TimePoly& a, const TimePoly& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coefficient(i) - b.coefficient(i);
  return TimePoly(std::move(c));
}

TimePoly operator*(const TimePoly& a, const TimePoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return TimePoly(std::move(c));
}

TimePoly operator*(const Rational& k, const TimePoly& a) {
  std::vector<Rational> c = a.coeffs_;
  for (auto& v : c) v *= k;
  return TimePoly(std::move(c));
}

// --- PolyExp ----------------------------------------------------------------

template <std::size_t Dim>
PolyExp<Dim> PolyExp<Dim>::monomial(const Rational& coeff, const Exponents& powers, const Rate& rate) {
  PolyExpBuilder<Dim> b;
  b.add(rate, powers, coeff);
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> PolyExp<Dim>::constant(const Rational& c) {
  return monomial(c, Exponents{}, Rate{});
}

template <std::size_t Dim>
std::size_t PolyExp<Dim>::term_count() const {
  std::size_t n = 0;
  for (const auto& [rate, poly] : terms_) n += poly.size();
  return n;
}

template <std::size_t Dim>
std::uint32_t PolyExp<Dim>::degree(std::size_t index) const {
  std::uint32_t deg = 0;
  for (const auto& [rate, poly] : terms_) {
    for (const auto& [powers, c] : poly) deg = std::max(deg, powers[index]);
  }
  return deg;
}

template <std::size_t Dim>
std::uint32_t PolyExp<Dim>::t_order() const {
  if (terms_.empty()) return 0;
  std::uint32_t order = UINT32_MAX;
  for (const auto& [rate, poly] : terms_) {
    for (const auto& [powers, c] : poly) order = std::min(order, powers[kTimeIndex]);
  }
  return order;
}

template <std::size_t Dim>
PolyExpBuilder<Dim>& PolyExpBuilder<Dim>::add(const Rate& rate, const Exponents& powers, const Rational& coeff) {
  if (coeff == 0) return *this;
  for (std::size_t d = 0; d < Dim; ++d) {
    if (rate[d] < 0) throw Error(ErrorKind::InvalidSpec, "negative exponential rate " + rate[d].get_str());
  }
  const unsigned cap = exponent_cap();
  for (std::size_t d = 0; d <= Dim; ++d) {
    if (powers[d] > cap) {
      throw Error(ErrorKind::DegreeOverflow,
                  "exponent " + std::to_string(powers[d]) + " exceeds cap " + std::to_string(cap));
    }
  }
  auto& poly = terms_[rate];
  auto [it, inserted] = poly.try_emplace(powers, coeff);
  if (!inserted) it->second += coeff;
  return *this;
}

template <std::size_t Dim>
PolyExpBuilder<Dim>& PolyExpBuilder<Dim>::add(const PolyExp<Dim>& f, const Rational& scale) {
  if (scale == 0) return *this;
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) add(rate, powers, scale == 1 ? c : Rational(c * scale));
  }
  return *this;
}

template <std::size_t Dim>
PolyExp<Dim> PolyExpBuilder<Dim>::build() && {
  for (auto rit = terms_.begin(); rit != terms_.end();) {
    auto& poly = rit->second;
    std::erase_if(poly, [](const auto& kv) { return kv.second == 0; });
    rit = poly.empty() ? terms_.erase(rit) : std::next(rit);
  }
  return PolyExp<Dim>(std::move(terms_));
}

template <std::size_t Dim>
PolyExp<Dim> add(const PolyExp<Dim>& f, const PolyExp<Dim>& g) {
  PolyExpBuilder<Dim> b;
  b.add(f).add(g);
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> sub(const PolyExp<Dim>& f, const PolyExp<Dim>& g) {
  PolyExpBuilder<Dim> b;
  b.add(f).add(g, Rational(-1));
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> scale(const PolyExp<Dim>& f, const Rational& c) {
  PolyExpBuilder<Dim> b;
  b.add(f, c);
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> mul(const PolyExp<Dim>& f, const PolyExp<Dim>& g) {
  return product_impl(f, g, false);
}

template <std::size_t Dim>
PolyExp<Dim> mul(const PolyExp<Dim>& f, const TimePoly& p) {
  PolyExpBuilder<Dim> b;
  const auto& pc = p.coefficients();
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) {
      for (std::size_t j = 0; j < pc.size(); ++j) {
        if (pc[j] == 0) continue;
        auto e = powers;
        e[Dim] += static_cast<std::uint32_t>(j);
        b.add(rate, e, c * pc[j]);
      }
    }
  }
  return std::move(b).build();
}

PolyExp1D shift_powers(const PolyExp1D& f, std::uint32_t px) {
  PolyExpBuilder<1> b;
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) b.add(rate, {powers[0] + px, powers[1]}, c);
  }
  return std::move(b).build();
}

PolyExp2D shift_powers(const PolyExp2D& f, std::uint32_t px, std::uint32_t py) {
  PolyExpBuilder<2> b;
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) b.add(rate, {powers[0] + px, powers[1] + py, powers[2]}, c);
  }
  return std::move(b).build();
}

PolyExp1D convolve_x(const PolyExp1D& f, const PolyExp1D& g) { return product_impl(f, g, true); }

PolyExp2D convolve_xy(const PolyExp2D& f, const PolyExp2D& g) { return product_impl(f, g, true); }

TimePoly moment_full(const PolyExp1D& f, unsigned j) {
  std::vector<Rational> coeffs(f.t_degree() + 1);
  for (const auto& [rate, poly] : f.terms()) {
    if (rate[0] <= 0) throw Error(ErrorKind::ZeroRate, "full-line moment of a term with rate 0");
    for (const auto& [powers, c] : poly) coeffs[powers[1]] += c * gamma_integral(powers[0] + j, rate[0]);
  }
  return TimePoly(std::move(coeffs));
}

TimePoly moment2d(const PolyExp2D& f, unsigned i, unsigned j) {
  std::vector<Rational> coeffs(f.t_degree() + 1);
  for (const auto& [rate, poly] : f.terms()) {
    if (rate[0] <= 0 || rate[1] <= 0) throw Error(ErrorKind::ZeroRate, "full-plane moment of a term with rate 0");
    for (const auto& [powers, c] : poly) {
      coeffs[powers[2]] += c * gamma_integral(powers[0] + i, rate[0]) * gamma_integral(powers[1] + j, rate[1]);
    }
  }
  return TimePoly(std::move(coeffs));
}

PolyExp1D tail_integral(const PolyExp1D& f, int p) {
  PolyExpBuilder<1> b;
  for (const auto& [rate, poly] : f.terms()) {
    const Rational& a = rate[0];
    if (a <= 0) throw Error(ErrorKind::ZeroRate, "tail integral of a term with rate 0");
    for (const auto& [powers, c] : poly) {
      const long n = static_cast<long>(powers[0]) + p;
      if (n < 0) {
        throw Error(ErrorKind::OutOfClass,
                    "tail integral of y^" + std::to_string(n) + " leaves the polynomial-exponential class");
      }
      // \int_x^\infty y^n e^{-a y} dy = e^{-a x} sum_k n!/k! x^k / a^{n-k+1}
      const Integer n_fact = factorial(static_cast<unsigned>(n));
      for (long k = 0; k <= n; ++k) {
        Rational falling(n_fact, factorial(static_cast<unsigned>(k)));
        falling.canonicalize();
        Rational coeff = c * falling / rational_pow(a, static_cast<unsigned>(n - k + 1));
        b.add(rate, {static_cast<std::uint32_t>(k), powers[1]}, coeff);
      }
    }
  }
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> time_antiderivative(const PolyExp<Dim>& f) {
  PolyExpBuilder<Dim> b;
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) {
      auto e = powers;
      e[Dim] += 1;
      b.add(rate, e, c / Rational(e[Dim]));
    }
  }
  return std::move(b).build();
}

template <std::size_t Dim>
PolyExp<Dim> at_time_zero(const PolyExp<Dim>& f) {
  PolyExpBuilder<Dim> b;
  for (const auto& [rate, poly] : f.terms()) {
    for (const auto& [powers, c] : poly) {
      if (powers[Dim] == 0) b.add(rate, powers, c);
    }
  }
  return std::move(b).build();
}

// --- Evaluation -------------------------------------------------------------

template <std::size_t Dim>
Evaluator<Dim>::Evaluator(const PolyExp<Dim>& f) {
  blocks_.reserve(f.terms().size());
  for (const auto& [rate, poly] : f.terms()) {
    Block block;
    for (std::size_t d = 0; d < Dim; ++d) {
      const SplitDouble r = split_double(rate[d]);
      block.rate[d] = static_cast<long double>(r.hi) + r.lo;
    }
    block.terms.reserve(poly.size());
    for (const auto& [powers, c] : poly) {
      const SplitDouble s = split_double(c);
      block.terms.push_back({powers, static_cast<long double>(s.hi) + s.lo});
      for (std::size_t d = 0; d <= Dim; ++d) block.max_power[d] = std::max(block.max_power[d], powers[d]);
    }
    blocks_.push_back(std::move(block));
  }
}

template <std::size_t Dim>
long double Evaluator<Dim>::sum_block(const Block& block, const std::array<long double, Dim + 1>& point) const {
  std::array<std::vector<long double>, Dim + 1> pow_table;
  for (std::size_t d = 0; d <= Dim; ++d) {
    auto& table = pow_table[d];
    table.resize(block.max_power[d] + 1);
    table[0] = 1.0L;
    for (std::size_t k = 1; k < table.size(); ++k) table[k] = table[k - 1] * point[d];
  }
  // Neumaier-compensated sum of the monomials.
  long double sum = 0, comp = 0;
  for (const Term& term : block.terms) {
    long double v = term.coeff;
    for (std::size_t d = 0; d <= Dim; ++d) v *= pow_table[d][term.powers[d]];
    const long double s = sum + v;
    comp += (std::fabs(sum) >= std::fabs(v)) ? (sum - s) + v : (v - s) + sum;
    sum = s;
  }
  long double exponent = 0;
  for (std::size_t d = 0; d < Dim; ++d) exponent -= block.rate[d] * point[d];
  return (sum + comp) * std::exp(exponent);
}

template <std::size_t Dim>
double Evaluator<Dim>::operator()(double x, double t) const requires(Dim == 1) {
  long double total = 0;
  for (const Block& block : blocks_) total += sum_block(block, {x, t});
  return static_cast<double>(total);
}

template <std::size_t Dim>
double Evaluator<Dim>::operator()(double x, double y, double t) const requires(Dim == 2) {
  long double total = 0;
  for (const Block& block : blocks_) total += sum_block(block, {x, y, t});
  return static_cast<double>(total);
}

double evaluate(const PolyExp1D& f, double x, double t) { return Evaluator<1>(f)(x, t); }

double evaluate(const PolyExp2D& f, double x, double y, double t) { return Evaluator<2>(f)(x, y, t); }

// --- Instantiations -----------------------------------------------------------

template class PolyExp<1>;
template class PolyExp<2>;
template class PolyExpBuilder<1>;
template class PolyExpBuilder<2>;
template class Evaluator<1>;
template class Evaluator<2>;

#define PBE_INSTANTIATE(D)                                                   \
  template PolyExp<D> add(const PolyExp<D>&, const PolyExp<D>&);             \
  template PolyExp<D> sub(const PolyExp<D>&, const PolyExp<D>&);             \
  template PolyExp<D> scale(const PolyExp<D>&, const Rational&);             \
  template PolyExp<D> mul(const PolyExp<D>&, const PolyExp<D>&);             \
  template PolyExp<D> mul(const PolyExp<D>&, const TimePoly&);               \
  template PolyExp<D> time_antiderivative(const PolyExp<D>&);                \
  template PolyExp<D> at_time_zero(const PolyExp<D>&);

PBE_INSTANTIATE(1)
PBE_INSTANTIATE(2)
#undef PBE_INSTANTIATE

}  // namespace pbe
