#ifndef PBE_ANALYSIS_HPP
#define PBE_ANALYSIS_HPP

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbe/exact.hpp"
#include "pbe/polyexp.hpp"
#include "pbe/series.hpp"

namespace pbe {

// --- Errors against exact solutions -------------------------------------------

inline constexpr double kDefaultL1Xmax = 50.0;
inline constexpr double kDefaultL1Step = 1e-2;

/// Composite Simpson approximation of \int_0^xmax |f(x,t) - u(x,t)| dx.
double l1_error(const PolyExp1D& f, const ExactSolution& sol, double t, double xmax = kDefaultL1Xmax,
                double step = kDefaultL1Step);

struct PointwiseError {
  double approx;
  double exact;
  double abs_error;
};

PointwiseError pointwise(const PolyExp1D& f, const ExactSolution& sol, double x, double t);
PointwiseError pointwise(const PolyExp2D& f, const ExactSolution& sol, double x, double y, double t);

// --- Moments ------------------------------------------------------------------

/// Exact moment mu_j of Psi_k as a polynomial in t.
TimePoly series_moment(const Series1D& series, std::size_t k, unsigned j);
/// Exact mixed moment mu_{i,j} of Psi_k.
TimePoly series_moment(const Series2D& series, std::size_t k, unsigned i, unsigned j);

// --- Norms and convergence bounds ---------------------------------------------

/// sup over s in [0, t0] of \int_0^\infty e^{lambda x} |f(x, s)| dx, sampled at
/// `samples` equispaced times. Each inner integral is exact when f(., s) has
/// provably one sign (all coefficients agree) and falls back to adaptive
/// Gauss-Kronrod quadrature on [0, xmax] otherwise. ZeroRate if some rate is
/// not larger than lambda.
double sup_l1_norm(const PolyExp1D& f, double t0, double lambda = 0.0, unsigned samples = 101,
                   double xmax = kDefaultL1Xmax);
/// Bivariate analogue, quadrature over [0, inf)^2 when the sign is mixed.
double sup_l1_norm(const PolyExp2D& f, double t0, unsigned samples = 101);

enum class BoundModel { Coag, Frag, Coag2D };

struct ConvergenceBound {
  BoundModel model;
  std::string label;
  double t0;
  double lipschitz;    // L for coagulation, lambda for fragmentation
  double contraction;  // Delta or vartheta
  unsigned m;
  double v1_norm;
  double bound;  // +inf when not contractive
  bool contractive;
};

/// L = |u0| (T + 1), Delta = t0^2 e^{2 t0 L} (|u0| + 2 t0 L^2 + 2 t0 L),
/// bound = Delta^m / (1 - Delta) |v1|.
ConvergenceBound coag_bound(double u0_norm, double horizon, double t0, unsigned m, double v1_norm);

/// vartheta = k! t0^2 / lambda^{k+1}, bound = vartheta^m / (1 - vartheta) |v1|.
ConvergenceBound frag_bound(unsigned k, double lambda, double t0, unsigned m, double v1_norm);

/// Bivariate constants, two readings of the same result:
///  [0] "theorem-statement": delta = 2 t0^2 e^{2 t0 L} (|u0| + 2 t0 L^2 + 2 t0 L)
///  [1] "proof-derived":     Delta = t0 * (t0 e^{2 t0 L} (|u0| + 2 t0 L^2 + 2 t0 L))
std::array<ConvergenceBound, 2> coag2d_bounds(double u0_norm, double horizon, double t0, unsigned m,
                                              double v1_norm);

std::string_view to_string(BoundModel model);

// --- Tables -------------------------------------------------------------------

struct ErrorTableSpec {
  enum class Kind {
    L1ByOrder,        // rows: truncation orders, columns: times, cells: l1_error
    PointwiseByTime,  // rows: times, columns: exact, approx, abs_error at fixed x
  };
  Kind kind = Kind::L1ByOrder;
  std::vector<std::size_t> orders;  // L1ByOrder: every row; PointwiseByTime: exactly one
  std::vector<double> times;
  double x = 5.0;
  double xmax = kDefaultL1Xmax;
  double step = kDefaultL1Step;
};

/// Rectangular table; cells[r][c] belongs to row_values[r] and columns[c].
struct ErrorTable {
  std::string row_label;
  std::vector<double> row_values;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> cells;
};

/// Cells are computed concurrently (OpenMP); placement is by index, so the
/// result does not depend on the schedule. InvalidSpec on empty axes.
ErrorTable error_table(const Series1D& series, const ExactSolution& sol, const ErrorTableSpec& spec);
/// Same table computed on the calling thread only.
ErrorTable error_table_serial(const Series1D& series, const ExactSolution& sol, const ErrorTableSpec& spec);

/// Header row then one line per row, row value first; %.17g numbers.
void write_csv(std::ostream& out, const ErrorTable& table);
nlohmann::ordered_json to_json(const ErrorTable& table);

/// printf("%.17g"), the CSV/JSON number format.
std::string format_number(double value);

}  // namespace pbe

#endif  // PBE_ANALYSIS_HPP
