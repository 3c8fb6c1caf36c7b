#include "pbe/problems.hpp"

#include <string>

#include "pbe/error.hpp"

namespace pbe {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

template <std::size_t Dim>
void validate_initial(const PolyExp<Dim>& u0) {
  if (u0.is_zero()) return;
  if (u0.t_degree() != 0) throw Error(ErrorKind::InvalidSpec, "initial condition must not depend on t");
  for (const auto& [rate, poly] : u0.terms()) {
    for (const auto& a : rate) {
      if (a <= 0) throw Error(ErrorKind::InvalidSpec, "initial condition needs strictly positive rates");
    }
  }
}

void validate_kernel_1d(CoagKernel kernel) {
  if (kernel == CoagKernel::Constant2D) {
    throw Error(ErrorKind::InvalidSpec, "Constant2D kernel requires the bivariate model");
  }
}

}  // namespace

FragSpec FragSpec::create(Rational c, unsigned r, Rational s, unsigned k) {
  if (c <= 0) throw Error(ErrorKind::InvalidSpec, "breakage constant c must be positive");
  if (r < 1) throw Error(ErrorKind::InvalidSpec, "breakage exponent r must be >= 1");
  if (s <= 0) throw Error(ErrorKind::InvalidSpec, "selection constant s must be positive");
  return FragSpec(std::move(c), r, std::move(s), k);
}

void validate(const ProblemSpec& problem) {
  std::visit(Overloaded{
                 [](const Coag1D& p) {
                   validate_kernel_1d(p.kernel);
                   validate_initial(p.u0);
                 },
                 [](const Frag& p) { validate_initial(p.u0); },
                 [](const CCFE& p) {
                   validate_kernel_1d(p.kernel);
                   validate_initial(p.u0);
                 },
                 [](const Coag2D& p) { validate_initial(p.u0); },
             },
             problem);
}

bool is_linear(const ProblemSpec& problem) { return std::holds_alternative<Frag>(problem); }

const PolyExp1D& initial_condition_1d(const ProblemSpec& problem) {
  return std::visit(Overloaded{
                        [](const Coag1D& p) -> const PolyExp1D& { return p.u0; },
                        [](const Frag& p) -> const PolyExp1D& { return p.u0; },
                        [](const CCFE& p) -> const PolyExp1D& { return p.u0; },
                        [](const Coag2D&) -> const PolyExp1D& {
                          throw Error(ErrorKind::Unsupported2D, "bivariate problem has no 1-D initial condition");
                        },
                    },
                    problem);
}

const PolyExp2D& initial_condition_2d(const ProblemSpec& problem) {
  if (const auto* p = std::get_if<Coag2D>(&problem)) return p->u0;
  throw Error(ErrorKind::InvalidSpec, "problem is not bivariate");
}

PolyExp1D coag_bilinear(CoagKernel kernel, const PolyExp1D& u, const PolyExp1D& w) {
  if (u.is_zero() || w.is_zero()) return {};
  const Rational half(1, 2);
  switch (kernel) {
    case CoagKernel::Constant: {
      // gain = u * w, loss = u mu_0(w)
      PolyExp1D gain = convolve_x(u, w);
      PolyExp1D loss = mul(u, moment_full(w, 0));
      return sub(scale(gain, half), loss);
    }
    case CoagKernel::Sum: {
      // K(x - y, y) = x: gain = x (u * w); loss = u (x mu_0(w) + mu_1(w))
      PolyExp1D gain = shift_powers(convolve_x(u, w), 1);
      PolyExp1D loss = add(shift_powers(mul(u, moment_full(w, 0)), 1), mul(u, moment_full(w, 1)));
      return sub(scale(gain, half), loss);
    }
    case CoagKernel::Product: {
      // K(x - y, y) = (x - y) y: gain = (x u) * (x w); loss = x u mu_1(w)
      PolyExp1D gain = convolve_x(shift_powers(u, 1), shift_powers(w, 1));
      PolyExp1D loss = shift_powers(mul(u, moment_full(w, 1)), 1);
      return sub(scale(gain, half), loss);
    }
    case CoagKernel::Constant2D:
      break;
  }
  throw Error(ErrorKind::InvalidSpec, "kernel is not a 1-D coagulation kernel");
}

PolyExp1D frag_rhs(const FragSpec& frag, const PolyExp1D& u) {
  if (u.is_zero()) return {};
  // birth: c s x^{r-1} \int_x^\infty y^{k-r} u(y) dy, death: s x^k u(x)
  const int power = static_cast<int>(frag.k()) - static_cast<int>(frag.r());
  PolyExp1D birth = scale(shift_powers(tail_integral(u, power), frag.r() - 1), frag.c() * frag.s());
  PolyExp1D death = scale(shift_powers(u, frag.k()), frag.s());
  return sub(birth, death);
}

PolyExp2D coag2d_bilinear(const PolyExp2D& u, const PolyExp2D& w) {
  if (u.is_zero() || w.is_zero()) return {};
  PolyExp2D gain = convolve_xy(u, w);
  PolyExp2D loss = mul(u, moment2d(w, 0, 0));
  return sub(scale(gain, Rational(1, 2)), loss);
}

PolyExp1D rhs(const ProblemSpec& problem, const PolyExp1D& u) {
  return std::visit(Overloaded{
                        [&](const Coag1D& p) { return coag_bilinear(p.kernel, u, u); },
                        [&](const Frag& p) { return frag_rhs(p.frag, u); },
                        [&](const CCFE& p) { return add(coag_bilinear(p.kernel, u, u), frag_rhs(p.frag, u)); },
                        [](const Coag2D&) -> PolyExp1D {
                          throw Error(ErrorKind::InvalidSpec, "1-D density passed to a bivariate problem");
                        },
                    },
                    problem);
}

PolyExp2D rhs(const ProblemSpec& problem, const PolyExp2D& u) {
  if (!is_2d(problem)) throw Error(ErrorKind::InvalidSpec, "2-D density passed to a 1-D problem");
  return coag2d_bilinear(u, u);
}

}  // namespace pbe
