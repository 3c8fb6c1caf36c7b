#ifndef PBE_REFSOLVER_HPP
#define PBE_REFSOLVER_HPP

// Grid-based reference solver for the 1-D equations: trapezoid quadrature of
// every integral term on a uniform x-grid, classical RK4 in time. It shares
// no integration code with the symbolic engine, so agreement between the two
// is independent evidence.

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pbe/polyexp.hpp"
#include "pbe/problems.hpp"

namespace pbe {

struct GridSpec {
  double xmax = 50.0;
  std::size_t n_cells = 2000;
  double dt = 1e-3;
  double t_end = 0.0;

  double h() const { return xmax / static_cast<double>(n_cells); }
  double node(std::size_t i) const { return h() * static_cast<double>(i); }
  /// InvalidSpec unless xmax > 0, n_cells >= 16, dt > 0, t_end >= 0.
  void validate() const;
};

struct GridFunction {
  GridSpec spec;
  std::vector<double> values;  // at nodes x_i = i h, i = 0 .. n_cells
  double time = 0.0;
};

/// Samples a symbolic density on the grid nodes at time t.
GridFunction sample(const PolyExp1D& f, const GridSpec& spec, double t);

/// Discretized right-hand side. Nodes are evaluated in parallel (OpenMP).
/// Unsupported2D for bivariate problems.
GridFunction discrete_rhs(const ProblemSpec& problem, const GridFunction& u);
/// Single-threaded reference for discrete_rhs; identical arithmetic per node.
GridFunction discrete_rhs_serial(const ProblemSpec& problem, const GridFunction& u);

/// RK4 from the sampled initial condition to spec.t_end with steps of at
/// most spec.dt. Throws Instability if any value exceeds 1e6 in magnitude.
GridFunction integrate(const ProblemSpec& problem, const GridSpec& spec);

/// Trapezoid approximation of \int_0^xmax x^j u dx.
double grid_moment(const GridFunction& u, unsigned j);

/// '#' comment header with the grid spec and time stamp, then "x,value" rows.
void write_csv(std::ostream& out, const GridFunction& u);

}  // namespace pbe

#endif  // PBE_REFSOLVER_HPP
