#include "pbe/analysis.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <ostream>

#include "pbe/error.hpp"

namespace pbe {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kQuadTol = 1e-12;
constexpr unsigned kQuadDepth = 20;

// Coefficients of f(., s) per rate: x-power (and y-power) -> value at t = s.
template <std::size_t Dim>
using FrozenPoly = std::map<std::array<std::uint32_t, Dim>, long double>;

template <std::size_t Dim>
std::vector<std::pair<std::array<long double, Dim>, FrozenPoly<Dim>>> freeze_time(const PolyExp<Dim>& f, double s) {
  std::vector<std::pair<std::array<long double, Dim>, FrozenPoly<Dim>>> out;
  for (const auto& [rate, poly] : f.terms()) {
    std::array<long double, Dim> r{};
    for (std::size_t d = 0; d < Dim; ++d) r[d] = to_double(rate[d]);
    FrozenPoly<Dim> frozen;
    for (const auto& [powers, c] : poly) {
      std::array<std::uint32_t, Dim> key{};
      for (std::size_t d = 0; d < Dim; ++d) key[d] = powers[d];
      const SplitDouble sc = split_double(c);
      frozen[key] += (static_cast<long double>(sc.hi) + sc.lo) * std::pow(static_cast<long double>(s), powers[Dim]);
    }
    out.emplace_back(r, std::move(frozen));
  }
  return out;
}

template <std::size_t Dim>
bool one_signed(const std::vector<std::pair<std::array<long double, Dim>, FrozenPoly<Dim>>>& frozen) {
  bool any_pos = false, any_neg = false;
  for (const auto& [rate, poly] : frozen) {
    for (const auto& [powers, c] : poly) {
      any_pos |= c > 0;
      any_neg |= c < 0;
    }
  }
  return !(any_pos && any_neg);
}

// With a single power of t the integral is s^j times a constant, so the
// sampled supremum sits at s = t0 and the other samples can be skipped.
template <std::size_t Dim>
unsigned first_sample(const PolyExp<Dim>& f, unsigned samples) {
  return (!f.is_zero() && f.t_order() == f.t_degree()) ? samples - 1 : 0;
}

double simpson_nodes(double xmax, double step) {
  double n = std::ceil(xmax / step - 1e-9);
  if (static_cast<long long>(n) % 2 != 0) n += 1;
  return std::max(n, 2.0);
}

void check_table_spec(const Series1D& series, const ErrorTableSpec& spec) {
  if (spec.orders.empty()) throw Error(ErrorKind::InvalidSpec, "error table needs at least one order");
  if (spec.times.empty()) throw Error(ErrorKind::InvalidSpec, "error table needs at least one time");
  if (spec.kind == ErrorTableSpec::Kind::PointwiseByTime && spec.orders.size() != 1) {
    throw Error(ErrorKind::InvalidSpec, "pointwise table takes exactly one truncation order");
  }
  for (std::size_t n : spec.orders) {
    if (n > series.order()) {
      throw Error(ErrorKind::IndexOutOfRange, "order " + std::to_string(n) + " exceeds series order " +
                                                  std::to_string(series.order()));
    }
  }
}

ErrorTable table_layout(const ErrorTableSpec& spec) {
  ErrorTable table;
  if (spec.kind == ErrorTableSpec::Kind::L1ByOrder) {
    table.row_label = "n";
    for (std::size_t n : spec.orders) table.row_values.push_back(static_cast<double>(n));
    for (double t : spec.times) {
      char buf[32];
      const auto end = std::to_chars(buf, buf + sizeof buf, t).ptr;
      table.columns.push_back("t=" + std::string(buf, end));
    }
  } else {
    table.row_label = "t";
    table.row_values = spec.times;
    table.columns = {"exact", "approx", "abs_error"};
  }
  table.cells.assign(table.row_values.size(), std::vector<double>(table.columns.size(), 0.0));
  return table;
}

// Fills one row of a table; rows are independent of each other.
struct TableFiller {
  const ErrorTableSpec& spec;
  const ExactSolution& sol;
  std::vector<PolyExp1D> partials;  // one per order in spec.orders
  std::vector<Evaluator<1>> evaluators;

  TableFiller(const Series1D& series, const ExactSolution& s, const ErrorTableSpec& sp) : spec(sp), sol(s) {
    for (std::size_t n : spec.orders) partials.push_back(series.truncated(n));
    for (const auto& p : partials) evaluators.emplace_back(p);
  }

  std::size_t cell_count(const ErrorTable& table) const { return table.row_values.size() * table.columns.size(); }

  void fill(ErrorTable& table, std::size_t cell) const {
    const std::size_t cols = table.columns.size();
    const std::size_t r = cell / cols, c = cell % cols;
    if (spec.kind == ErrorTableSpec::Kind::L1ByOrder) {
      table.cells[r][c] = l1_error(partials[r], sol, spec.times[c], spec.xmax, spec.step);
    } else {
      const double t = spec.times[r];
      const double approx = evaluators.front()(spec.x, t);
      const double exact = eval_exact(sol, spec.x, std::nullopt, t);
      table.cells[r][c] = c == 0 ? exact : c == 1 ? approx : std::fabs(approx - exact);
    }
  }
};

ConvergenceBound make_bound(BoundModel model, std::string label, double t0, double lipschitz, double contraction,
                            unsigned m, double v1_norm) {
  const bool contractive = contraction < 1.0;
  const double bound = contractive ? std::pow(contraction, static_cast<double>(m)) / (1.0 - contraction) * v1_norm
                                   : std::numeric_limits<double>::infinity();
  return {model, std::move(label), t0, lipschitz, contraction, m, v1_norm, bound, contractive};
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidSpec, std::string(what) + " must be positive and finite");
  }
}

}  // namespace

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double l1_error(const PolyExp1D& f, const ExactSolution& sol, double t, double xmax, double step) {
  require_positive(xmax, "xmax");
  require_positive(step, "step");
  if (t < 0) throw Error(ErrorKind::InvalidSpec, "time must be nonnegative");
  const Evaluator<1> eval(f);
  const double n = simpson_nodes(xmax, step);
  const long long count = static_cast<long long>(n);
  const double h = xmax / n;
  long double sum = 0;
  for (long long i = 0; i <= count; ++i) {
    const double x = h * static_cast<double>(i);
    const double e = std::fabs(eval(x, t) - eval_exact(sol, x, std::nullopt, t));
    const double w = (i == 0 || i == count) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * e;
  }
  return static_cast<double>(sum * h / 3.0);
}

PointwiseError pointwise(const PolyExp1D& f, const ExactSolution& sol, double x, double t) {
  const double approx = evaluate(f, x, t);
  const double exact = eval_exact(sol, x, std::nullopt, t);
  return {approx, exact, std::fabs(approx - exact)};
}

PointwiseError pointwise(const PolyExp2D& f, const ExactSolution& sol, double x, double y, double t) {
  const double approx = evaluate(f, x, y, t);
  const double exact = eval_exact(sol, x, y, t);
  return {approx, exact, std::fabs(approx - exact)};
}

TimePoly series_moment(const Series1D& series, std::size_t k, unsigned j) {
  return moment_full(series.truncated(k), j);
}

TimePoly series_moment(const Series2D& series, std::size_t k, unsigned i, unsigned j) {
  return moment2d(series.truncated(k), i, j);
}

double sup_l1_norm(const PolyExp1D& f, double t0, double lambda, unsigned samples, double xmax) {
  if (t0 < 0 || samples == 0) throw Error(ErrorKind::InvalidSpec, "sup norm needs t0 >= 0 and samples > 0");
  for (const auto& [rate, poly] : f.terms()) {
    if (rate[0] <= lambda) {
      throw Error(ErrorKind::ZeroRate, "weighted L1 norm diverges: rate " + rate[0].get_str() +
                                           " is not above the weight exponent");
    }
  }
  const Evaluator<1> eval(f);
  double best = 0.0;
  for (unsigned i = first_sample(f, samples); i < samples; ++i) {
    const double s = samples == 1 ? t0 : t0 * static_cast<double>(i) / (samples - 1);
    const auto frozen = freeze_time(f, s);
    double value;
    if (one_signed(frozen)) {
      long double total = 0;
      for (const auto& [rate, poly] : frozen) {
        const long double a = rate[0] - lambda;
        for (const auto& [powers, c] : poly) {
          total += c * std::exp(std::lgamma(powers[0] + 1.0L) - (powers[0] + 1.0L) * std::log(a));
        }
      }
      value = static_cast<double>(std::fabs(total));
    } else {
      auto integrand = [&](double x) { return std::exp(lambda * x) * std::fabs(eval(x, s)); };
      value = gauss_kronrod<double, 61>::integrate(integrand, 0.0, xmax, kQuadDepth, kQuadTol);
    }
    best = std::max(best, value);
  }
  return best;
}

double sup_l1_norm(const PolyExp2D& f, double t0, unsigned samples) {
  if (t0 < 0 || samples == 0) throw Error(ErrorKind::InvalidSpec, "sup norm needs t0 >= 0 and samples > 0");
  for (const auto& [rate, poly] : f.terms()) {
    if (rate[0] <= 0 || rate[1] <= 0) throw Error(ErrorKind::ZeroRate, "L1 norm of a term with rate 0");
  }
  const Evaluator<2> eval(f);
  const double inf = std::numeric_limits<double>::infinity();
  double best = 0.0;
  for (unsigned i = first_sample(f, samples); i < samples; ++i) {
    const double s = samples == 1 ? t0 : t0 * static_cast<double>(i) / (samples - 1);
    const auto frozen = freeze_time(f, s);
    double value;
    if (one_signed(frozen)) {
      long double total = 0;
      for (const auto& [rate, poly] : frozen) {
        for (const auto& [powers, c] : poly) {
          total += c * std::exp(std::lgamma(powers[0] + 1.0L) - (powers[0] + 1.0L) * std::log(rate[0]) +
                                std::lgamma(powers[1] + 1.0L) - (powers[1] + 1.0L) * std::log(rate[1]));
        }
      }
      value = static_cast<double>(std::fabs(total));
    } else {
      auto inner = [&](double x) {
        auto g = [&](double y) { return std::fabs(eval(x, y, s)); };
        return gauss_kronrod<double, 31>::integrate(g, 0.0, inf, 10, 1e-10);
      };
      value = gauss_kronrod<double, 31>::integrate(inner, 0.0, inf, 10, 1e-10);
    }
    best = std::max(best, value);
  }
  return best;
}

ConvergenceBound coag_bound(double u0_norm, double horizon, double t0, unsigned m, double v1_norm) {
  require_positive(u0_norm, "|u0|");
  require_positive(horizon, "T");
  require_positive(t0, "t0");
  require_positive(v1_norm, "|v1|");
  const double L = u0_norm * (horizon + 1.0);
  const double delta = t0 * t0 * std::exp(2.0 * t0 * L) * (u0_norm + 2.0 * t0 * L * L + 2.0 * t0 * L);
  return make_bound(BoundModel::Coag, "coag", t0, L, delta, m, v1_norm);
}

ConvergenceBound frag_bound(unsigned k, double lambda, double t0, unsigned m, double v1_norm) {
  if (k == 0) throw Error(ErrorKind::InvalidSpec, "selection exponent k must be positive");
  require_positive(lambda, "lambda");
  require_positive(t0, "t0");
  require_positive(v1_norm, "|v1|");
  const double theta = std::tgamma(k + 1.0) * t0 * t0 / std::pow(lambda, k + 1.0);
  return make_bound(BoundModel::Frag, "frag", t0, lambda, theta, m, v1_norm);
}

std::array<ConvergenceBound, 2> coag2d_bounds(double u0_norm, double horizon, double t0, unsigned m,
                                              double v1_norm) {
  require_positive(u0_norm, "|u0|");
  require_positive(horizon, "T");
  require_positive(t0, "t0");
  require_positive(v1_norm, "|v1|");
  const double L = u0_norm * (horizon + 1.0);
  const double core = std::exp(2.0 * t0 * L) * (u0_norm + 2.0 * t0 * L * L + 2.0 * t0 * L);
  return {make_bound(BoundModel::Coag2D, "theorem-statement", t0, L, 2.0 * t0 * t0 * core, m, v1_norm),
          make_bound(BoundModel::Coag2D, "proof-derived", t0, L, t0 * (t0 * core), m, v1_norm)};
}

std::string_view to_string(BoundModel model) {
  switch (model) {
    case BoundModel::Coag: return "coag";
    case BoundModel::Frag: return "frag";
    case BoundModel::Coag2D: return "coag2d";
  }
  return "unknown";
}

ErrorTable error_table(const Series1D& series, const ExactSolution& sol, const ErrorTableSpec& spec) {
  check_table_spec(series, spec);
  ErrorTable table = table_layout(spec);
  const TableFiller filler(series, sol, spec);
  const long long cells = static_cast<long long>(filler.cell_count(table));
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (long long cell = 0; cell < cells; ++cell) {
    try {
      filler.fill(table, static_cast<std::size_t>(cell));
    } catch (...) {
#pragma omp critical(pbe_error_table)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

ErrorTable error_table_serial(const Series1D& series, const ExactSolution& sol, const ErrorTableSpec& spec) {
  check_table_spec(series, spec);
  ErrorTable table = table_layout(spec);
  const TableFiller filler(series, sol, spec);
  for (std::size_t cell = 0; cell < filler.cell_count(table); ++cell) filler.fill(table, cell);
  return table;
}

void write_csv(std::ostream& out, const ErrorTable& table) {
  out << table.row_label;
  for (const auto& c : table.columns) out << ',' << c;
  out << '\n';
  for (std::size_t r = 0; r < table.row_values.size(); ++r) {
    out << format_number(table.row_values[r]);
    for (double v : table.cells[r]) out << ',' << format_number(v);
    out << '\n';
  }
}

nlohmann::ordered_json to_json(const ErrorTable& table) {
  nlohmann::ordered_json j;
  j["row_label"] = table.row_label;
  j["rows"] = table.row_values;
  j["columns"] = table.columns;
  j["cells"] = table.cells;
  return j;
}

}  // namespace pbe
