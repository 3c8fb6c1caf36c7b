#include "pbe/refsolver.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>

#include "pbe/error.hpp"

namespace pbe {

namespace {

constexpr double kBlowUp = 1e6;

struct Mechanisms {
  std::optional<CoagKernel> kernel;
  std::optional<FragSpec> frag;
};

Mechanisms mechanisms(const ProblemSpec& problem) {
  if (const auto* p = std::get_if<Coag1D>(&problem)) return {p->kernel, std::nullopt};
  if (const auto* p = std::get_if<Frag>(&problem)) return {std::nullopt, p->frag};
  if (const auto* p = std::get_if<CCFE>(&problem)) return {p->kernel, p->frag};
  throw Error(ErrorKind::Unsupported2D, "the reference solver handles 1-D problems only");
}

// Node-independent pieces of the right-hand side, O(N) to build.
struct Precomputed {
  double mu0 = 0.0;
  double mu1 = 0.0;
  std::vector<double> tail;  // \int_{x_i}^{xmax} y^{k-r} u(y) dy
  double frag_c = 0.0, frag_s = 0.0;
  unsigned frag_r = 0, frag_k = 0;
};

double kernel_value(CoagKernel kernel, double x, double y) {
  switch (kernel) {
    case CoagKernel::Constant: return 1.0;
    case CoagKernel::Sum: return x + y;
    case CoagKernel::Product: return x * y;
    case CoagKernel::Constant2D: break;
  }
  throw Error(ErrorKind::InvalidSpec, "kernel is not a 1-D coagulation kernel");
}

Precomputed precompute(const Mechanisms& mech, const GridFunction& u) {
  const auto& v = u.values;
  const std::size_t n = v.size() - 1;
  const double h = u.spec.h();
  Precomputed pre;
  if (mech.kernel) {
    double s0 = 0.5 * (v[0] + v[n]);
    double s1 = 0.5 * u.spec.node(n) * v[n];
    for (std::size_t j = 1; j < n; ++j) {
      s0 += v[j];
      s1 += u.spec.node(j) * v[j];
    }
    pre.mu0 = h * s0;
    pre.mu1 = h * s1;
  }
  if (mech.frag) {
    pre.frag_c = to_double(mech.frag->c());
    pre.frag_s = to_double(mech.frag->s());
    pre.frag_r = mech.frag->r();
    pre.frag_k = mech.frag->k();
    const double power = static_cast<double>(pre.frag_k) - static_cast<double>(pre.frag_r);
    std::vector<double> g(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      const double y = u.spec.node(j);
      // y^{k-r} at y = 0 with k < r: the node is dropped (integrable singularity excluded).
      g[j] = (y == 0.0 && power < 0.0) ? 0.0 : std::pow(y, power) * v[j];
    }
    pre.tail.assign(n + 1, 0.0);
    double suffix = g[n];
    for (std::size_t i = n; i-- > 0;) {
      suffix += g[i];
      pre.tail[i] = h * (suffix - 0.5 * g[i] - 0.5 * g[n]);
    }
  }
  return pre;
}

double node_rhs(const Mechanisms& mech, const Precomputed& pre, const GridFunction& u, std::size_t i) {
  const auto& v = u.values;
  const double h = u.spec.h();
  const double x = u.spec.node(i);
  double value = 0.0;
  if (mech.kernel) {
    const CoagKernel kernel = *mech.kernel;
    double gain = 0.0;
    if (i > 0) {
      gain = 0.5 * (kernel_value(kernel, x, 0.0) * v[i] * v[0] + kernel_value(kernel, 0.0, x) * v[0] * v[i]);
      double inner = 0.0;
      switch (kernel) {
        case CoagKernel::Constant:
          for (std::size_t j = 1; j < i; ++j) inner += v[i - j] * v[j];
          break;
        case CoagKernel::Sum:
          inner = x * [&] {
            double s = 0.0;
            for (std::size_t j = 1; j < i; ++j) s += v[i - j] * v[j];
            return s;
          }();
          break;
        case CoagKernel::Product:
          for (std::size_t j = 1; j < i; ++j) {
            const double y = u.spec.node(j);
            inner += (x - y) * y * v[i - j] * v[j];
          }
          break;
        case CoagKernel::Constant2D: break;
      }
      gain = h * (gain + inner);
    }
    double loss_integral = 0.0;
    switch (kernel) {
      case CoagKernel::Constant: loss_integral = pre.mu0; break;
      case CoagKernel::Sum: loss_integral = x * pre.mu0 + pre.mu1; break;
      case CoagKernel::Product: loss_integral = x * pre.mu1; break;
      case CoagKernel::Constant2D: break;
    }
    value += 0.5 * gain - v[i] * loss_integral;
  }
  if (mech.frag) {
    const double birth = pre.frag_c * pre.frag_s * std::pow(x, pre.frag_r - 1.0) * pre.tail[i];
    const double death = pre.frag_s * std::pow(x, static_cast<double>(pre.frag_k)) * v[i];
    value += birth - death;
  }
  return value;
}

GridFunction rhs_impl(const ProblemSpec& problem, const GridFunction& u, bool parallel) {
  const Mechanisms mech = mechanisms(problem);
  const Precomputed pre = precompute(mech, u);
  GridFunction out{u.spec, std::vector<double>(u.values.size()), u.time};
  const long long n = static_cast<long long>(u.values.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long i = 0; i < n; ++i) out.values[i] = node_rhs(mech, pre, u, static_cast<std::size_t>(i));
  } else {
    for (long long i = 0; i < n; ++i) out.values[i] = node_rhs(mech, pre, u, static_cast<std::size_t>(i));
  }
  return out;
}

void axpy(std::vector<double>& out, const std::vector<double>& base, double a, const std::vector<double>& dir) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + a * dir[i];
}

}  // namespace

void GridSpec::validate() const {
  if (!(xmax > 0.0)) throw Error(ErrorKind::InvalidSpec, "grid xmax must be positive");
  if (n_cells < 16) throw Error(ErrorKind::InvalidSpec, "grid needs at least 16 cells");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidSpec, "time step must be positive");
  if (!(t_end >= 0.0)) throw Error(ErrorKind::InvalidSpec, "end time must be nonnegative");
}

GridFunction sample(const PolyExp1D& f, const GridSpec& spec, double t) {
  spec.validate();
  const Evaluator<1> eval(f);
  GridFunction g{spec, std::vector<double>(spec.n_cells + 1), t};
  for (std::size_t i = 0; i <= spec.n_cells; ++i) g.values[i] = eval(spec.node(i), t);
  return g;
}

GridFunction discrete_rhs(const ProblemSpec& problem, const GridFunction& u) { return rhs_impl(problem, u, true); }

GridFunction discrete_rhs_serial(const ProblemSpec& problem, const GridFunction& u) {
  return rhs_impl(problem, u, false);
}

GridFunction integrate(const ProblemSpec& problem, const GridSpec& spec) {
  spec.validate();
  mechanisms(problem);
  GridFunction u = sample(initial_condition_1d(problem), spec, 0.0);
  if (spec.t_end == 0.0) return u;

  const auto steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt - 1e-9));
  const double dt = spec.t_end / static_cast<double>(steps);
  GridFunction stage = u;
  std::vector<double> acc(u.values.size());
  for (std::size_t step = 0; step < steps; ++step) {
    const double t = dt * static_cast<double>(step);
    const GridFunction k1 = discrete_rhs(problem, u);
    axpy(stage.values, u.values, 0.5 * dt, k1.values);
    const GridFunction k2 = discrete_rhs(problem, stage);
    axpy(stage.values, u.values, 0.5 * dt, k2.values);
    const GridFunction k3 = discrete_rhs(problem, stage);
    axpy(stage.values, u.values, dt, k3.values);
    const GridFunction k4 = discrete_rhs(problem, stage);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      u.values[i] += dt / 6.0 * (k1.values[i] + 2.0 * k2.values[i] + 2.0 * k3.values[i] + k4.values[i]);
      if (!std::isfinite(u.values[i]) || std::fabs(u.values[i]) > kBlowUp) {
        throw Error(ErrorKind::Instability,
                    "grid solution exceeded " + std::to_string(kBlowUp) + " at t=" + std::to_string(t + dt));
      }
    }
    u.time = (step + 1 == steps) ? spec.t_end : t + dt;
  }
  return u;
}

double grid_moment(const GridFunction& u, unsigned j) {
  const std::size_t n = u.values.size() - 1;
  double sum = 0.5 * (std::pow(u.spec.node(0), j) * u.values[0] + std::pow(u.spec.node(n), j) * u.values[n]);
  for (std::size_t i = 1; i < n; ++i) sum += std::pow(u.spec.node(i), j) * u.values[i];
  return sum * u.spec.h();
}

void write_csv(std::ostream& out, const GridFunction& u) {
  char buf[64];
  out << "# grid xmax=" << u.spec.xmax << " n_cells=" << u.spec.n_cells << " dt=" << u.spec.dt
      << " t_end=" << u.spec.t_end << '\n';
  out << "# time=" << u.time << '\n';
  out << "x,value\n";
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", u.spec.node(i), u.values[i]);
    out << buf << '\n';
  }
}

}  // namespace pbe
