// Acceptance checks: one PASS/FAIL line per criterion, details on indented
// lines below it. Exit status is nonzero when any criterion fails.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "pbe/analysis.hpp"
#include "pbe/exact.hpp"
#include "pbe/refsolver.hpp"
#include "pbe/series.hpp"
#include "printed.hpp"
#include "support.hpp"

using namespace pbe;
using namespace pbe::test;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Report {
  int failures = 0;

  void verdict(int id, bool pass, const std::string& what) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++failures;
  }
};

void info(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
void info(const char* fmt, ...) {
  std::va_list args;
  va_start(args, fmt);
  std::printf("    ");
  std::vprintf(fmt, args);
  std::printf("\n");
  va_end(args);
}

struct Named {
  const char* name;
  ProblemSpec problem;
};

std::vector<Named> worked_examples() {
  return {{"6.1", example_const()},     {"6.2", example_sum()},       {"6.3", example_product()},
          {"6.4", example_ccfe_slow()}, {"6.5", example_ccfe_fast()}, {"6.6", example_bivariate()}};
}

// Digits of x rounded to `sig` significant figures, as in "%.{sig-1}e".
std::string sci(double x, int sig) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", sig - 1, x);
  return buf;
}

// --- 1 ------------------------------------------------------------------------

void criterion1(Report& report) {
  const auto start = Clock::now();
  bool ok = true;
  auto check = [&](const char* label, const PolyExp1D& got, const PolyExp1D& want) {
    const bool equal = got == want;
    info("%-28s %s", label, equal ? "structurally equal" : "DIFFERENT");
    ok = ok && equal;
  };
  const auto c = iterate_ahpetm<1>(example_const(), 3);
  check("6.1 v1", c.component(1), printed::const_v1());
  check("6.1 v2", c.component(2), printed::const_v2());
  check("6.1 v3 (1/40642560)", c.component(3), printed::const_v3());
  const auto s = iterate_ahpetm<1>(example_sum(), 2);
  check("6.2 v1", s.component(1), printed::sum_v1());
  check("6.2 v2", s.component(2), printed::sum_v2());
  const auto p = iterate_ahpetm<1>(example_product(), 2);
  check("6.3 v1", p.component(1), printed::product_v1());
  check("6.3 v2 (1/544320)", p.component(2), printed::product_v2());
  const auto slow = iterate_ahpetm<1>(example_ccfe_slow(), 2);
  check("6.4 v1", slow.component(1), printed::ccfe_slow_v1());
  check("6.4 v2 (1/3780)", slow.component(2), printed::ccfe_slow_v2());
  const auto fast = iterate_ahpetm<1>(example_ccfe_fast(), 2);
  check("6.5 v1", fast.component(1), printed::ccfe_fast_v1());
  check("6.5 v2 (8/945)", fast.component(2), printed::ccfe_fast_v2());

  // v1 = C t x y e^{-50x-50y} (x^2 y^2 - d): read C and d off the monomials.
  const auto v1 = iterate_ahpetm<2>(example_bivariate(), 1).component(1);
  const Rational rate = 50;
  const auto& terms = v1.terms();
  bool shape = terms.size() == 1 && terms.begin()->first == PolyExp2D::Rate{rate, rate} &&
               terms.begin()->second.size() == 2;
  Rational coeff, low;
  if (shape) {
    const auto& poly = terms.begin()->second;
    const auto hi = poly.find({3, 3, 1});
    const auto lo = poly.find({1, 1, 1});
    shape = hi != poly.end() && lo != poly.end();
    if (shape) {
      coeff = hi->second;
      low = lo->second;
    }
  }
  const Rational offset = shape ? Rational(-low / coeff) : Rational(0);
  const bool digits = shape && sci(to_double(coeff), 6) == sci(std::stod(printed::kBivariateV1Digits), 6);
  const bool offset_ok = shape && offset == parse_rational(printed::kBivariateV1Offset);
  info("6.6 v1 coefficient          %s = %s (printed %s)", to_string(coeff).c_str(), sci(to_double(coeff), 9).c_str(),
       printed::kBivariateV1Digits);
  info("6.6 v1 offset               %s (printed %s)", to_string(offset).c_str(), printed::kBivariateV1Offset);
  ok = ok && digits && offset_ok;

  const double elapsed = seconds_since(start);
  info("runtime %.3f s (limit 10 s)", elapsed);
  report.verdict(1, ok && elapsed < 10.0, "printed series components reproduced exactly");
}

// --- 2 ------------------------------------------------------------------------

// Units in the last printed digit of a decimal literal such as "2.71288e-5".
double last_digit_unit(const std::string& text) {
  const auto e = text.find_first_of("eE");
  const std::string mantissa = text.substr(0, e);
  const int exponent = e == std::string::npos ? 0 : std::stoi(text.substr(e + 1));
  const auto dot = mantissa.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  return std::pow(10.0, exponent - decimals);
}

void criterion2(Report& report) {
  const auto start = Clock::now();
  struct Row {
    double t;
    const char* exact;
    const char* error;
  };
  const std::vector<Row> table{{0.2, "0.0129", "2.71288e-5"}, {0.4, "0.0146", "5.3035e-4"},
                               {0.6, "0.0138", "2.3932e-3"},  {0.8, "0.0121", "5.8862e-3"},
                               {1.0, "0.0101", "0.0102"},     {1.2, "0.0082", "0.0137"},
                               {1.4, "0.0067", "0.0131"},     {1.6, "0.00545", "0.00038"}};
  const auto s = iterate_ahpetm<1>(example_sum(), 4);
  const auto psi = s.truncated(4);
  bool ok = true;
  for (const auto& row : table) {
    const auto p = pointwise(psi, SumKernelExp{}, 5.0, row.t);
    const bool exact_ok = std::fabs(p.exact - std::stod(row.exact)) <= 0.5e-4;
    const double units = std::fabs(p.abs_error - std::stod(row.error)) / last_digit_unit(row.error);
    const bool error_ok = units <= 2.0;
    info("t=%.1f exact %.6f vs %-8s %s   error %.6e vs %-10s (%.2f units) %s", row.t, p.exact, row.exact,
         exact_ok ? "ok" : "MISMATCH", p.abs_error, row.error, units, error_ok ? "ok" : "MISMATCH");
    ok = ok && exact_ok && error_ok;
  }
  const double elapsed = seconds_since(start);
  info("runtime %.3f s (limit 5 s)", elapsed);
  report.verdict(2, ok && elapsed < 5.0, "pointwise table at x = 5 (sum kernel, n = 4)");
}

// --- 3 ------------------------------------------------------------------------

void criterion3(Report& report) {
  const auto start = Clock::now();
  const std::vector<std::vector<double>> printed_table{{0.0014, 0.0153, 0.0543, 0.1239},
                                                       {1.366e-4, 2.656e-3, 1.294e-2, 3.632e-2},
                                                       {1.072e-5, 3.7972e-4, 2.5718e-3, 9.0682e-3},
                                                       {7.154e-7, 4.6146e-5, 4.3241e-4, 1.8931e-3}};
  const auto s = iterate_ahpetm<1>(example_const(), 6);
  ErrorTableSpec spec;
  spec.orders = {3, 4, 5, 6};
  spec.times = {0.5, 1.0, 1.5, 2.0};
  const auto table = error_table(s, ConstKernelExp{}, spec);
  bool factor = true, columns = true, rows = true;
  for (std::size_t r = 0; r < 4; ++r) {
    std::string line = "n=" + std::to_string(spec.orders[r]) + ":";
    for (std::size_t c = 0; c < 4; ++c) {
      const double ratio = table.cells[r][c] / printed_table[r][c];
      factor = factor && ratio >= 0.5 && ratio <= 2.0;
      line += "  " + sci(table.cells[r][c], 4) + " (x" + sci(ratio, 3) + ")";
      if (r > 0) columns = columns && table.cells[r][c] < table.cells[r - 1][c];
      if (c > 0) rows = rows && table.cells[r][c] > table.cells[r][c - 1];
    }
    info("%s", line.c_str());
  }
  info("within factor 2: %s, decreasing in n: %s, increasing in t: %s", factor ? "yes" : "no",
       columns ? "yes" : "no", rows ? "yes" : "no");
  const double elapsed = seconds_since(start);
  info("runtime %.3f s (limit 30 s)", elapsed);
  report.verdict(3, factor && columns && rows && elapsed < 30.0, "L1 error table, constant kernel");
}

// --- 4 ------------------------------------------------------------------------

void criterion4(Report& report) {
  bool ok = true;
  for (const auto& [name, problem] : worked_examples()) {
    bool example_ok = true;
    if (is_2d(problem)) {
      const auto s = iterate_ahpetm<2>(problem, 5);
      for (std::size_t k = 1; k <= 5; ++k) {
        example_ok = example_ok && moment2d(s.component(k), 1, 0).is_zero() && moment2d(s.component(k), 0, 1).is_zero();
        example_ok = example_ok && series_moment(s, k, 1, 0) == moment2d(s.component(0), 1, 0) &&
                     series_moment(s, k, 0, 1) == moment2d(s.component(0), 0, 1);
      }
    } else {
      const auto s = iterate_ahpetm<1>(problem, 5);
      for (std::size_t k = 1; k <= 5; ++k) {
        example_ok = example_ok && moment_full(s.component(k), 1).is_zero();
        example_ok = example_ok && series_moment(s, k, 1) == moment_full(s.component(0), 1);
      }
    }
    info("%s: mass of v_1..v_5 %s", name, example_ok ? "exactly 0" : "NONZERO");
    ok = ok && example_ok;
  }
  report.verdict(4, ok, "exact mass conservation of every component");
}

// --- 5 ------------------------------------------------------------------------

std::string poly_string(const TimePoly& p) {
  std::string out;
  for (std::size_t j = 0; j < p.coefficients().size(); ++j) {
    if (j > 0) out += " + ";
    out += "(" + to_string(p.coefficients()[j]) + ")t^" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

void criterion5(Report& report) {
  const TimePoly taylor({1, -q(1, 2), q(1, 4), -q(1, 8)});
  const auto s = iterate_ahpetm<1>(example_const(), 3);
  const auto mu0 = series_moment(s, 3, 0);
  const bool literal = mu0 == taylor;
  info("6.1 mu_0(Psi_3) = %s", poly_string(mu0).c_str());
  bool low_blocks = true;
  for (std::size_t j = 0; j <= 3; ++j) low_blocks = low_blocks && mu0.coefficient(j) == taylor.coefficient(j);
  info("6.1 t^0..t^3 blocks equal 1 - t/2 + t^2/4 - t^3/8: %s", low_blocks ? "yes" : "no");
  const auto classical = series_moment(iterate_classical<1>(example_const(), 3), 3, 0);
  info("6.1 classical mu_0(Psi_3) = %s", poly_string(classical).c_str());
  bool ok = literal;
  for (const auto& [name, problem] : {Named{"6.4", example_ccfe_slow()}, Named{"6.5", example_ccfe_fast()}}) {
    const auto series = iterate_ahpetm<1>(problem, 3);
    bool one = true;
    for (std::size_t k = 0; k <= 3; ++k) {
      const auto m = series_moment(series, k, 0);
      one = one && m == TimePoly::constant(1);
      info("%s mu_0(Psi_%zu) = %s", name, k, poly_string(m).c_str());
    }
    ok = ok && one;
  }
  report.verdict(5, ok,
                 "mu_0(Psi_3) of 6.1 equals 1 - t/2 + t^2/4 - t^3/8 exactly; mu_0(Psi_k) == 1 for 6.4 and 6.5");
}

// --- 6 ------------------------------------------------------------------------

void criterion6(Report& report) {
  bool ok = true;
  for (const auto& [name, problem] : worked_examples()) {
    bool example_ok = true;
    if (is_2d(problem)) {
      const auto s = iterate_ahpetm<2>(problem, 5);
      for (std::size_t k = 0; k <= 4; ++k) {
        example_ok = example_ok &&
                     s.truncated(k + 1) == s.component(0) + time_antiderivative(rhs(problem, s.truncated(k)));
      }
    } else {
      const auto s = iterate_ahpetm<1>(problem, 5);
      for (std::size_t k = 0; k <= 4; ++k) {
        example_ok = example_ok &&
                     s.truncated(k + 1) == s.component(0) + time_antiderivative(rhs(problem, s.truncated(k)));
      }
    }
    info("%s: Psi_{k+1} = u0 + T[rhs(Psi_k)] for k = 0..4: %s", name, example_ok ? "holds" : "FAILS");
    ok = ok && example_ok;
  }
  report.verdict(6, ok, "Picard identity");
}

// --- 7 ------------------------------------------------------------------------

void criterion7(Report& report) {
  const auto a = iterate_ahpetm<1>(example_frag(), 5);
  const auto c = iterate_classical<1>(example_frag(), 5);
  const bool same = a.components() == c.components();
  info("classical and accelerated components identical for k <= 5: %s", same ? "yes" : "no");
  // (1+t)^2 e^{-xt} e^{-x}: t^k block is (-x)^k/k! + 2(-x)^{k-1}/(k-1)! + (-x)^{k-2}/(k-2)!.
  bool blocks = true;
  for (unsigned k = 0; k <= 5; ++k) {
    std::vector<Rational> coeffs(k + 1, Rational(0));
    for (unsigned shift = 0; shift <= 2 && shift <= k; ++shift) {
      const unsigned m = k - shift;
      const Rational weight = shift == 1 ? 2 : 1;
      coeffs[m] += weight * Rational(m % 2 ? -1 : 1) / Rational(factorial(m));
    }
    blocks = blocks && a.component(k) == poly_exp(coeffs, k, 1);
  }
  info("components equal the t^k Taylor blocks of (1+t)^2 e^{-x(1+t)}, k <= 5: %s", blocks ? "yes" : "no");
  report.verdict(7, same && blocks, "fragmentation: both methods agree with the exact Taylor blocks");
}

// --- 8 ------------------------------------------------------------------------

double cli_max_deviation(const std::vector<std::string>& extra) {
  std::vector<std::string> args{"pbesolve", "reference-check", "--terms", "4",   "--t",
                                "0.25",     "--n-cells",       "2000",    "--dt", "0.001"};
  args.insert(args.end(), extra.begin(), extra.end());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) {
    info("reference-check failed: %s", err.str().c_str());
    return INFINITY;
  }
  const auto text = out.str();
  const auto pos = text.find("# max_deviation=");
  return pos == std::string::npos ? INFINITY : std::stod(text.substr(pos + 16));
}

double max_node_deviation(const GridFunction& u, const std::function<double(double)>& f) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) worst = std::max(worst, std::fabs(u.values[i] - f(u.spec.node(i))));
  return worst;
}

void criterion8(Report& report) {
  const auto start = Clock::now();
  const double d61 = cli_max_deviation({});
  const double d64 = cli_max_deviation({"--model", "ccfe", "--frag", "2,1,1/2,1", "--u0", "monoexp:4,1,2"});
  info("6.1 max |Psi_4 - grid| at t=0.25: %.4e (limit 5e-4)", d61);
  info("6.4 max |Psi_4 - grid| at t=0.25: %.4e (limit 5e-4)", d64);

  // Refinement: halve h and dt. The 6.1 deviation from Psi_4 is dominated by
  // series truncation, so its discretization error is measured against the
  // exact solution; 6.4 has no closed form and is measured against Psi_4.
  GridSpec coarse{50.0, 2000, 1e-3, 0.25};
  GridSpec fine{50.0, 4000, 5e-4, 0.25};
  auto exact61 = [](double x) { return eval_exact(ConstKernelExp{}, x, std::nullopt, 0.25); };
  const double e_coarse = max_node_deviation(integrate(example_const(), coarse), exact61);
  const double e_fine = max_node_deviation(integrate(example_const(), fine), exact61);
  const Evaluator<1> psi64(iterate_ahpetm<1>(example_ccfe_slow(), 4).truncated(4));
  auto series64 = [&](double x) { return psi64(x, 0.25); };
  const double g_coarse = max_node_deviation(integrate(example_ccfe_slow(), coarse), series64);
  const double g_fine = max_node_deviation(integrate(example_ccfe_slow(), fine), series64);
  info("6.1 |grid - exact|:  n=2000 %.4e, n=4000 %.4e, ratio %.2f", e_coarse, e_fine, e_coarse / e_fine);
  info("6.4 |grid - Psi_4|:  n=2000 %.4e, n=4000 %.4e, ratio %.2f", g_coarse, g_fine, g_coarse / g_fine);
  const bool halves = e_coarse >= 2 * e_fine && g_coarse >= 2 * g_fine;
  const double elapsed = seconds_since(start);
  info("runtime %.1f s (limit 60 s)", elapsed);
  report.verdict(8, d61 <= 5e-4 && d64 <= 5e-4 && halves && elapsed < 60.0,
                 "symbolic series against the grid reference solver");
}

// --- 9 ------------------------------------------------------------------------

// sup over 101 sampled s in [0, t0] of \int_0^50 |Psi(x, s) - u(x, s)| dx.
double sup_l1_error(const PolyExp1D& psi, double t0) {
  const Evaluator<1> eval(psi);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double s = t0 * i / 100.0;
    auto diff = [&](double x) { return std::fabs(eval(x, s) - eval_exact(ConstKernelExp{}, x, std::nullopt, s)); };
    worst = std::max(worst, boost::math::quadrature::gauss_kronrod<double, 61>::integrate(diff, 0.0, 50.0, 10, 1e-9));
  }
  return worst;
}

void criterion9(Report& report) {
  const auto s = iterate_ahpetm<1>(example_const(), 3);
  auto evaluate_at = [&](double t0, bool print) {
    const double u0_norm = sup_l1_norm(s.component(0), t0);
    const double v1_norm = sup_l1_norm(s.component(1), t0);
    bool ok = true;
    for (unsigned m = 1; m <= 3; ++m) {
      const auto b = coag_bound(u0_norm, 1.0, t0, m, v1_norm);
      const double err = sup_l1_error(s.truncated(m), t0);
      ok = ok && b.contractive && err <= b.bound;
      if (print) {
        info("t0=%.2f m=%u  Delta=%.4e  bound=%.4e  measured=%.4e  %s", t0, m, b.contraction, b.bound, err,
             err <= b.bound ? "within" : "EXCEEDS");
      }
    }
    return ok;
  };
  const bool ok = evaluate_at(0.05, true);
  for (double t0 : {0.1, 0.2, 0.25}) {
    const bool sweep = evaluate_at(t0, false);
    info("t0=%.2f: measured <= bound for m = 1..3: %s", t0, sweep ? "yes" : "no");
  }
  report.verdict(9, ok, "a-priori bound dominates the measured error at t0 = 0.05");
}

}  // namespace

int main() {
  Report report;
  criterion1(report);
  criterion2(report);
  criterion3(report);
  criterion4(report);
  criterion5(report);
  criterion6(report);
  criterion7(report);
  criterion8(report);
  criterion9(report);
  std::printf("%d of 9 criteria passed\n", 9 - report.failures);
  return report.failures == 0 ? 0 : 1;
}
