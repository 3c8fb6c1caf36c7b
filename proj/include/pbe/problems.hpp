#ifndef PBE_PROBLEMS_HPP
#define PBE_PROBLEMS_HPP

#include <variant>

#include "pbe/polyexp.hpp"

namespace pbe {

/// Closed set of coagulation kernels with a known gain/loss reduction.
enum class CoagKernel {
  Constant,    // K(x, y) = 1
  Sum,         // K(x, y) = x + y
  Product,     // K(x, y) = x y
  Constant2D,  // K(x, x', y, y') = 1, bivariate only
};

/// Power-law breakage B(x, y) = c x^{r-1} / y^r with selection S(x) = s x^k.
class FragSpec {
 public:
  /// Rejects c <= 0, r < 1, s <= 0 with InvalidSpec.
  static FragSpec create(Rational c, unsigned r, Rational s, unsigned k);
  /// Binary breakage B = 2/y with S(x) = s x.
  static FragSpec binary(Rational s) { return create(2, 1, std::move(s), 1); }

  const Rational& c() const { return c_; }
  unsigned r() const { return r_; }
  const Rational& s() const { return s_; }
  unsigned k() const { return k_; }

  /// \int_0^y x B(x, y) dx = y holds exactly when c = r + 1.
  bool mass_conserving() const { return c_ == r_ + 1; }

  friend bool operator==(const FragSpec&, const FragSpec&) = default;

 private:
  FragSpec(Rational c, unsigned r, Rational s, unsigned k) : c_(std::move(c)), r_(r), s_(std::move(s)), k_(k) {}
  Rational c_;
  unsigned r_;
  Rational s_;
  unsigned k_;
};

struct Coag1D {
  CoagKernel kernel;
  PolyExp1D u0;
};

struct Frag {
  FragSpec frag;
  PolyExp1D u0;
};

struct CCFE {
  CoagKernel kernel;
  FragSpec frag;
  PolyExp1D u0;
};

struct Coag2D {
  PolyExp2D u0;
};

using ProblemSpec = std::variant<Coag1D, Frag, CCFE, Coag2D>;

/// Checks kernel/dimension consistency and that u0 is time independent with
/// strictly positive rates. Throws InvalidSpec.
void validate(const ProblemSpec& problem);

inline bool is_2d(const ProblemSpec& problem) { return std::holds_alternative<Coag2D>(problem); }
bool is_linear(const ProblemSpec& problem);

const PolyExp1D& initial_condition_1d(const ProblemSpec& problem);
const PolyExp2D& initial_condition_2d(const ProblemSpec& problem);

/// Q(u, w) = gain(u, w)/2 - loss(u, w). Q(u, u) is the coagulation
/// right-hand side; the form is bilinear so series expansions can use it on
/// distinct components.
PolyExp1D coag_bilinear(CoagKernel kernel, const PolyExp1D& u, const PolyExp1D& w);

/// Birth minus death for the fragmentation operator; linear in u.
PolyExp1D frag_rhs(const FragSpec& frag, const PolyExp1D& u);

/// Constant-kernel bivariate Q(u, w) = conv_xy(u, w)/2 - u * mu_00(w).
PolyExp2D coag2d_bilinear(const PolyExp2D& u, const PolyExp2D& w);

/// Right-hand side of the governing equation at u.
PolyExp1D rhs(const ProblemSpec& problem, const PolyExp1D& u);
PolyExp2D rhs(const ProblemSpec& problem, const PolyExp2D& u);

}  // namespace pbe

#endif  // PBE_PROBLEMS_HPP
