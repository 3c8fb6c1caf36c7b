#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "pbe/analysis.hpp"
#include "pbe/error.hpp"
#include "pbe/rational.hpp"
#include "pbe/refsolver.hpp"
#include "pbe/serialize.hpp"
#include "pbe/series.hpp"

namespace pbe::cli {

namespace {

constexpr std::size_t kMaxGridPoints = 10'000'000;
constexpr std::string_view kDefaultU0_2D = "monoexp2:6250000,1,1,50,50";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

unsigned parse_unsigned(std::string_view text, const char* what) {
  const Rational r = parse_rational(trim(text));
  if (r < 0 || r.get_den() != 1 || r > std::numeric_limits<unsigned>::max()) {
    invalid(std::string(what) + " must be a nonnegative integer, got '" + std::string(text) + "'");
  }
  return static_cast<unsigned>(r.get_num().get_ui());
}

std::vector<Rational> parse_fields(std::string_view body, std::size_t count, std::string_view form) {
  const auto parts = split(body, ',');
  if (parts.size() != count) invalid("expected " + std::string(form));
  std::vector<Rational> values;
  for (auto p : parts) values.push_back(parse_rational(trim(p)));
  return values;
}

// --- Problem assembly ---------------------------------------------------------

struct Settings {
  std::string model = "coag";
  std::string kernel = "constant";
  std::string frag = "2,1,1,1";
  std::string u0;
  std::string method = "ahpetm";
  std::size_t terms = 3;
  std::optional<std::string> t;
  std::optional<std::string> x;
  std::optional<std::string> y;
  std::string compare;
  std::string format = "csv";
  std::string out;
  std::string dump;
  double xmax = kDefaultL1Xmax;
  double step = kDefaultL1Step;
  std::size_t n_cells = 2000;
  double dt = 1e-3;
  std::string kind = "l1";
  std::string orders;
  std::string moments = "0,1,2";
  double t0 = 0.05;
  double horizon = 1.0;
  unsigned m = 3;
  double lambda = 0.5;
};

CoagKernel kernel_of(const std::string& name) {
  if (name == "constant") return CoagKernel::Constant;
  if (name == "sum") return CoagKernel::Sum;
  if (name == "product") return CoagKernel::Product;
  invalid("unknown kernel '" + name + "'");
}

ProblemSpec build_problem(const Settings& s) {
  ProblemSpec problem;
  if (s.model == "coag2d") {
    if (s.kernel != "constant") invalid("the bivariate model supports the constant kernel only");
    problem = Coag2D{parse_u0_2d(s.u0.empty() ? kDefaultU0_2D : std::string_view(s.u0))};
  } else {
    const PolyExp1D u0 = parse_u0_1d(s.u0.empty() ? std::string_view("exp:1") : std::string_view(s.u0));
    if (s.model == "coag") {
      problem = Coag1D{kernel_of(s.kernel), u0};
    } else if (s.model == "frag") {
      problem = Frag{parse_frag(s.frag), u0};
    } else if (s.model == "ccfe") {
      problem = CCFE{kernel_of(s.kernel), parse_frag(s.frag), u0};
    } else {
      invalid("unknown model '" + s.model + "'");
    }
  }
  validate(problem);
  return problem;
}

Method method_of(const std::string& name) { return name == "classical" ? Method::ClassicalADM : Method::AHPETM; }

// An absent flag takes the fallback; a flag given with an empty list is an error.
std::vector<double> require_grid(const std::optional<std::string>& text, std::string_view fallback,
                                 const char* what) {
  auto values = parse_grid(text ? std::string_view(*text) : fallback);
  if (values.empty()) invalid(std::string("empty ") + what + " list");
  return values;
}

ExactSolution require_exact(const ProblemSpec& problem) {
  auto sol = infer_exact(problem);
  if (!sol) invalid("no exact solution is known for this problem");
  return *sol;
}

// --- Output -------------------------------------------------------------------

struct Frame {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, double>> summary;  // trailing '#' lines / extra JSON keys
};

std::vector<std::pair<std::string, std::string>> metadata(const std::string& command, const Settings& s) {
  std::vector<std::pair<std::string, std::string>> meta{{"command", command}, {"model", s.model}};
  if (s.model != "frag") meta.emplace_back("kernel", s.kernel);
  if (s.model == "frag" || s.model == "ccfe") meta.emplace_back("frag", s.frag);
  meta.emplace_back("u0", s.u0.empty() ? std::string(s.model == "coag2d" ? kDefaultU0_2D : "exp:1") : s.u0);
  meta.emplace_back("method", s.method);
  meta.emplace_back("terms", std::to_string(s.terms));
  return meta;
}

std::string render(const Frame& frame, const std::vector<std::pair<std::string, std::string>>& meta,
                   const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : meta) j["meta"][k] = v;
    nlohmann::ordered_json columns = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < frame.columns.size(); ++c) {
      nlohmann::ordered_json col = nlohmann::ordered_json::array();
      for (const auto& row : frame.rows) col.push_back(row[c]);
      columns[frame.columns[c]] = std::move(col);
    }
    j["columns"] = std::move(columns);
    for (const auto& [k, v] : frame.summary) j[k] = v;
    os << j.dump(2) << '\n';
    return os.str();
  }
  os << "# pbesolve";
  for (const auto& [k, v] : meta) os << ' ' << k << '=' << v;
  os << '\n';
  for (std::size_t c = 0; c < frame.columns.size(); ++c) os << (c ? "," : "") << frame.columns[c];
  os << '\n';
  for (const auto& row : frame.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
  for (const auto& [k, v] : frame.summary) os << "# " << k << '=' << format_number(v) << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

template <std::size_t Dim>
std::string symbolic_text(const SeriesSolution<Dim>& series) {
  return to_json(series).dump(2) + "\n";
}

// --- Commands -----------------------------------------------------------------

double interpolate(const GridFunction& g, double x) {
  if (x < 0 || x > g.spec.xmax) invalid("reference grid does not cover x=" + format_number(x));
  const double pos = x / g.spec.h();
  const std::size_t i = std::min(static_cast<std::size_t>(pos), g.spec.n_cells - 1);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * g.values[i] + w * g.values[i + 1];
}

GridSpec grid_spec(const Settings& s, double t_end) { return GridSpec{s.xmax, s.n_cells, s.dt, t_end}; }

template <std::size_t Dim>
SeriesSolution<Dim> solve(const ProblemSpec& problem, const Settings& s, std::ostream& out) {
  auto series = iterate<Dim>(problem, method_of(s.method), s.terms);
  if (!s.dump.empty()) write_text(s.dump, symbolic_text(series), out);
  return series;
}

Frame cmd_density(const ProblemSpec& problem, const Settings& s, std::ostream& out) {
  const bool two_d = is_2d(problem);
  const auto times = require_grid(s.t, "1", "t");
  const auto xs = require_grid(s.x, two_d ? "0:0.2:0.02" : "0:10:0.5", "x");
  const auto ys = two_d ? require_grid(s.y, "0:0.2:0.02", "y") : std::vector<double>{};
  const bool with_exact = s.compare == "exact" || s.compare == "both";
  const bool with_reference = s.compare == "reference" || s.compare == "both";
  if (with_reference && two_d) throw Error(ErrorKind::Unsupported2D, "the reference solver handles 1-D problems only");
  std::optional<ExactSolution> sol;
  if (with_exact) sol = require_exact(problem);

  Frame frame;
  frame.columns = {"x"};
  if (two_d) frame.columns.push_back("y");
  frame.columns.push_back("t");
  frame.columns.push_back("psi_" + std::to_string(s.terms));
  if (with_exact) {
    frame.columns.push_back("exact");
    frame.columns.push_back("abs_error");
  }
  if (with_reference) {
    frame.columns.push_back("reference");
    frame.columns.push_back("ref_abs_error");
  }

  if (two_d) {
    const auto series = solve<2>(problem, s, out);
    const Evaluator<2> eval(series.truncated(s.terms));
    for (double t : times) {
      for (double x : xs) {
        for (double y : ys) {
          const double approx = eval(x, y, t);
          std::vector<double> row{x, y, t, approx};
          if (sol) {
            const double exact = eval_exact(*sol, x, y, t);
            row.push_back(exact);
            row.push_back(std::fabs(approx - exact));
          }
          frame.rows.push_back(std::move(row));
        }
      }
    }
    return frame;
  }

  const auto series = solve<1>(problem, s, out);
  const Evaluator<1> eval(series.truncated(s.terms));
  for (double t : times) {
    std::optional<GridFunction> reference;
    if (with_reference) reference = integrate(problem, grid_spec(s, t));
    for (double x : xs) {
      const double approx = eval(x, t);
      std::vector<double> row{x, t, approx};
      if (sol) {
        const double exact = eval_exact(*sol, x, std::nullopt, t);
        row.push_back(exact);
        row.push_back(std::fabs(approx - exact));
      }
      if (reference) {
        const double ref = interpolate(*reference, x);
        row.push_back(ref);
        row.push_back(std::fabs(approx - ref));
      }
      frame.rows.push_back(std::move(row));
    }
  }
  return frame;
}

std::vector<std::size_t> parse_orders(const Settings& s) {
  if (s.orders.empty()) return {s.terms};
  std::vector<std::size_t> orders;
  for (double v : parse_grid(s.orders)) {
    if (v < 0 || v != std::floor(v)) invalid("orders must be nonnegative integers");
    orders.push_back(static_cast<std::size_t>(v));
  }
  if (orders.empty()) invalid("empty orders list");
  return orders;
}

Frame cmd_error_table(const ProblemSpec& problem, const Settings& s, std::ostream& out) {
  if (is_2d(problem)) throw Error(ErrorKind::Unsupported2D, "error tables are available for 1-D problems");
  const ExactSolution sol = require_exact(problem);
  ErrorTableSpec spec;
  spec.times = require_grid(s.t, s.kind == "l1" ? "0.5,1,1.5,2" : "0.2:1.6:0.2", "t");
  spec.xmax = s.xmax;
  spec.step = s.step;
  if (s.kind == "l1") {
    spec.kind = ErrorTableSpec::Kind::L1ByOrder;
    spec.orders = parse_orders(s);
  } else {
    spec.kind = ErrorTableSpec::Kind::PointwiseByTime;
    spec.orders = {s.terms};
    const auto xs = require_grid(s.x, "5", "x");
    if (xs.size() != 1) invalid("pointwise tables take a single --x value");
    spec.x = xs.front();
  }
  Settings deep = s;
  deep.terms = *std::max_element(spec.orders.begin(), spec.orders.end());
  const auto series = solve<1>(problem, deep, out);
  const ErrorTable table = error_table(series, sol, spec);

  Frame frame;
  frame.columns = {table.row_label};
  frame.columns.insert(frame.columns.end(), table.columns.begin(), table.columns.end());
  for (std::size_t r = 0; r < table.row_values.size(); ++r) {
    std::vector<double> row{table.row_values[r]};
    row.insert(row.end(), table.cells[r].begin(), table.cells[r].end());
    frame.rows.push_back(std::move(row));
  }
  return frame;
}

Frame cmd_moments(const ProblemSpec& problem, const Settings& s, std::ostream& out) {
  const bool two_d = is_2d(problem);
  const auto times = require_grid(s.t, "0:2:0.1", "t");
  const auto sol = infer_exact(problem);

  std::vector<std::pair<unsigned, unsigned>> orders;
  for (auto part : split(s.moments, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    if (two_d) {
      const auto ij = split(part, ':');
      if (ij.size() != 2) invalid("bivariate moments are given as i:j");
      orders.emplace_back(parse_unsigned(ij[0], "moment index"), parse_unsigned(ij[1], "moment index"));
    } else {
      orders.emplace_back(parse_unsigned(part, "moment index"), 0);
    }
  }
  if (orders.empty()) invalid("empty moment list");

  Frame frame;
  frame.columns = {"t"};
  std::vector<TimePoly> approx;
  std::vector<std::optional<MomentFunction>> exact;
  std::optional<Series1D> series1;
  std::optional<Series2D> series2;
  if (two_d) {
    series2 = solve<2>(problem, s, out);
  } else {
    series1 = solve<1>(problem, s, out);
  }
  for (const auto& [i, j] : orders) {
    const std::string label = two_d ? "mu_" + std::to_string(i) + "_" + std::to_string(j) : "mu_" + std::to_string(i);
    approx.push_back(two_d ? series_moment(*series2, s.terms, i, j) : series_moment(*series1, s.terms, i));
    frame.columns.push_back(label + "_approx");
    if (sol && j == 0) {
      exact.emplace_back(exact_moment(*sol, i));
      frame.columns.push_back(label + "_exact");
    } else {
      exact.emplace_back();
    }
  }
  for (double t : times) {
    std::vector<double> row{t};
    for (std::size_t k = 0; k < orders.size(); ++k) {
      row.push_back(approx[k].evaluate(t));
      if (exact[k]) row.push_back((*exact[k])(t));
    }
    frame.rows.push_back(std::move(row));
  }
  return frame;
}

Frame cmd_bounds(const ProblemSpec& problem, const Settings& s, std::ostream& out,
                 std::vector<std::pair<std::string, std::string>>& meta) {
  std::vector<ConvergenceBound> bounds;
  double u0_norm = 0.0;
  Settings first = s;
  first.terms = std::max<std::size_t>(s.terms, 1);
  if (std::holds_alternative<Coag1D>(problem)) {
    const auto series = solve<1>(problem, first, out);
    u0_norm = sup_l1_norm(series.component(0), s.t0);
    bounds.push_back(coag_bound(u0_norm, s.horizon, s.t0, s.m, sup_l1_norm(series.component(1), s.t0)));
  } else if (const auto* frag = std::get_if<Frag>(&problem)) {
    const auto series = solve<1>(problem, first, out);
    u0_norm = sup_l1_norm(series.component(0), s.t0, s.lambda);
    bounds.push_back(frag_bound(frag->frag.k(), s.lambda, s.t0, s.m,
                                sup_l1_norm(series.component(1), s.t0, s.lambda)));
  } else if (is_2d(problem)) {
    const auto series = solve<2>(problem, first, out);
    u0_norm = sup_l1_norm(series.component(0), s.t0);
    const auto pair = coag2d_bounds(u0_norm, s.horizon, s.t0, s.m, sup_l1_norm(series.component(1), s.t0));
    bounds.assign(pair.begin(), pair.end());
  } else {
    invalid("convergence bounds are available for the coag, frag and coag2d models");
  }
  meta.emplace_back("t0", format_number(s.t0));
  meta.emplace_back("m", std::to_string(s.m));

  Frame frame;
  frame.columns = {"u0_norm", "lipschitz", "contraction", "v1_norm", "bound", "contractive"};
  for (const auto& b : bounds) {
    meta.emplace_back("row" + std::to_string(frame.rows.size()),
                      b.label + (b.contractive ? "/contractive" : "/NotContractive"));
    frame.rows.push_back({u0_norm, b.lipschitz, b.contraction, b.v1_norm, b.bound, b.contractive ? 1.0 : 0.0});
  }
  return frame;
}

Frame cmd_reference_check(const ProblemSpec& problem, const Settings& s, std::ostream& out) {
  if (is_2d(problem)) throw Error(ErrorKind::Unsupported2D, "the reference solver handles 1-D problems only");
  const auto times = require_grid(s.t, "0.25", "t");
  if (times.size() != 1) invalid("reference-check takes a single --t value");
  const auto series = solve<1>(problem, s, out);
  const GridFunction reference = integrate(problem, grid_spec(s, times.front()));
  const Evaluator<1> eval(series.truncated(s.terms));

  Frame frame;
  frame.columns = {"x", "reference", "psi_" + std::to_string(s.terms), "abs_deviation"};
  double worst = 0.0;
  for (std::size_t i = 0; i < reference.values.size(); ++i) {
    const double x = reference.spec.node(i);
    const double approx = eval(x, reference.time);
    const double dev = std::fabs(approx - reference.values[i]);
    worst = std::max(worst, dev);
    frame.rows.push_back({x, reference.values[i], approx, dev});
  }
  frame.summary.emplace_back("max_deviation", worst);
  return frame;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec:
    case ErrorKind::Parse:
    case ErrorKind::Unsupported2D:
    case ErrorKind::IndexOutOfRange: return kExitConfig;
    default: return kExitEngine;
  }
}

void diagnose(std::ostream& err, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  err << "pbesolve: " << message << '\n';
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  text = trim(text);
  std::vector<double> values;
  if (text.empty()) return values;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) invalid("range must be start:stop:step");
    const Rational start = parse_rational(trim(parts[0]));
    const Rational stop = parse_rational(trim(parts[1]));
    const Rational step = parse_rational(trim(parts[2]));
    if (step <= 0) invalid("range step must be positive");
    if (stop < start) invalid("range stop is below start");
    const Rational span = (stop - start) / step;
    const Integer count = span.get_num() / span.get_den();
    if (count >= kMaxGridPoints) invalid("range has too many points");
    for (unsigned long i = 0; i <= count.get_ui(); ++i) {
      values.push_back(to_double(start + step * Rational(static_cast<long>(i))));
    }
    return values;
  }
  for (auto part : split(text, ',')) values.push_back(to_double(parse_rational(trim(part))));
  return values;
}

PolyExp1D parse_u0_1d(std::string_view text) {
  PolyExpBuilder<1> builder;
  for (auto term : split(text, '+')) {
    term = trim(term);
    const auto colon = term.find(':');
    const auto kind = term.substr(0, colon);
    const auto body = colon == std::string_view::npos ? std::string_view() : term.substr(colon + 1);
    if (kind == "exp") {
      builder.add({parse_rational(trim(body))}, {0, 0}, Rational(1));
    } else if (kind == "monoexp") {
      const auto v = parse_fields(body, 3, "monoexp:c,p,a");
      if (v[1] < 0 || v[1].get_den() != 1 || v[1] > exponent_cap()) invalid("monoexp power must be a nonnegative integer");
      builder.add({v[2]}, {static_cast<std::uint32_t>(v[1].get_num().get_ui()), 0}, v[0]);
    } else {
      throw Error(ErrorKind::Parse, "unknown initial-condition term '" + std::string(term) + "'");
    }
  }
  return std::move(builder).build();
}

PolyExp2D parse_u0_2d(std::string_view text) {
  PolyExpBuilder<2> builder;
  for (auto term : split(text, '+')) {
    term = trim(term);
    const auto colon = term.find(':');
    if (term.substr(0, colon) != "monoexp2" || colon == std::string_view::npos) {
      throw Error(ErrorKind::Parse, "unknown bivariate initial-condition term '" + std::string(term) + "'");
    }
    const auto v = parse_fields(term.substr(colon + 1), 5, "monoexp2:c,px,py,ax,ay");
    for (int i : {1, 2}) {
      if (v[i] < 0 || v[i].get_den() != 1 || v[i] > exponent_cap()) invalid("monoexp2 powers must be nonnegative integers");
    }
    builder.add({v[3], v[4]},
                {static_cast<std::uint32_t>(v[1].get_num().get_ui()), static_cast<std::uint32_t>(v[2].get_num().get_ui()), 0},
                v[0]);
  }
  return std::move(builder).build();
}

FragSpec parse_frag(std::string_view text) {
  const auto v = parse_fields(text, 4, "--frag c,r,s,k");
  for (int i : {1, 3}) {
    if (v[i] < 0 || v[i].get_den() != 1 || v[i] > 64) invalid("fragmentation r and k must be small nonnegative integers");
  }
  return FragSpec::create(v[0], static_cast<unsigned>(v[1].get_num().get_ui()), v[2],
                          static_cast<unsigned>(v[3].get_num().get_ui()));
}

std::optional<ExactSolution> infer_exact(const ProblemSpec& problem) {
  const auto unit_exp = PolyExp1D::monomial(Rational(1), {0, 0}, {Rational(1)});
  if (const auto* p = std::get_if<Coag1D>(&problem)) {
    if (!(p->u0 == unit_exp)) return std::nullopt;
    switch (p->kernel) {
      case CoagKernel::Constant: return ConstKernelExp{};
      case CoagKernel::Sum: return SumKernelExp{};
      case CoagKernel::Product: return ProductKernelExp{};
      case CoagKernel::Constant2D: return std::nullopt;
    }
  }
  if (const auto* p = std::get_if<Frag>(&problem)) {
    const FragSpec& f = p->frag;
    if (p->u0 == unit_exp && f.c() == 2 && f.r() == 1 && f.s() == 1 && f.k() == 1) return FragLinearExp{};
    return std::nullopt;
  }
  if (const auto* p = std::get_if<Coag2D>(&problem)) {
    const auto& terms = p->u0.terms();
    if (terms.size() != 1 || terms.begin()->second.size() != 1) return std::nullopt;
    const auto& [rate, poly] = *terms.begin();
    const auto& [powers, coeff] = *poly.begin();
    if (powers[2] != 0 || coeff <= 0) return std::nullopt;
    BivariateConst b;
    b.p1 = powers[0];
    b.p2 = powers[1];
    b.m1 = (b.p1 + 1) / rate[0];
    b.m2 = (b.p2 + 1) / rate[1];
    Rational n0 = coeff * b.m1 * b.m2 * Rational(factorial(powers[0])) * Rational(factorial(powers[1]));
    for (std::uint32_t i = 0; i < powers[0]; ++i) n0 *= b.m1;
    for (std::uint32_t i = 0; i < powers[1]; ++i) n0 *= b.m2;
    for (std::uint32_t i = 0; i <= powers[0]; ++i) n0 /= b.p1 + 1;
    for (std::uint32_t i = 0; i <= powers[1]; ++i) n0 /= b.p2 + 1;
    b.n0 = n0;
    return b;
  }
  return std::nullopt;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Semi-analytical population balance solver", "pbesolve"};
  app.set_config("--config", "", "Flat key = value file; flags on the command line take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--model", s.model, "coag | frag | ccfe | coag2d")
      ->check(CLI::IsMember({"coag", "frag", "ccfe", "coag2d"}));
  app.add_option("--kernel", s.kernel, "constant | sum | product")->check(CLI::IsMember({"constant", "sum", "product"}));
  app.add_option("--frag", s.frag, "Fragmentation c,r,s,k: B = c x^(r-1)/y^r, S = s x^k");
  app.add_option("--u0", s.u0, "exp:a | monoexp:c,p,a | monoexp2:c,px,py,ax,ay, joined by '+'");
  app.add_option("--method", s.method, "ahpetm | classical")->check(CLI::IsMember({"ahpetm", "classical"}));
  app.add_option("--terms", s.terms, "Truncation order n of Psi_n");
  app.add_option("--t", s.t, "Times: list v1,v2,... or range a:b:step");
  app.add_option("--x", s.x, "x values: list or range");
  app.add_option("--y", s.y, "y values (bivariate): list or range");
  app.add_option("--compare", s.compare, "exact | reference | both")->check(CLI::IsMember({"exact", "reference", "both"}));
  app.add_option("--format", s.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", s.out, "Output file (default: standard output)");
  app.add_option("--dump-symbolic", s.dump, "Also write the series components as JSON to this path");
  app.add_option("--xmax", s.xmax, "Domain truncation for integrals and the reference grid");
  app.add_option("--n-cells", s.n_cells, "Reference grid cells");
  app.add_option("--dt", s.dt, "Reference time step");

  auto* density = app.add_subcommand("density", "Truncated series density on an (x[, y], t) grid");
  auto* table = app.add_subcommand("error-table", "Error table against the exact solution");
  table->add_option("--kind", s.kind, "l1 (rows: orders, columns: times) | pointwise (rows: times at fixed x)")
      ->check(CLI::IsMember({"l1", "pointwise"}));
  table->add_option("--orders", s.orders, "Truncation orders for l1 tables");
  table->add_option("--step", s.step, "Simpson step of the L1 integral");
  auto* moments = app.add_subcommand("moments", "Moments of Psi_n and of the exact solution");
  moments->add_option("--j", s.moments, "Moment orders j,... (bivariate: i:j,...)");
  auto* bounds = app.add_subcommand("bounds", "Contraction constants and a-priori error bounds");
  bounds->add_option("--t0", s.t0, "Time horizon of the contraction argument");
  bounds->add_option("--T", s.horizon, "T in the Lipschitz constant L = |u0| (T + 1)");
  bounds->add_option("--m", s.m, "Truncation index of the bound");
  bounds->add_option("--lambda", s.lambda, "Exponential weight of the fragmentation norm");
  auto* reference = app.add_subcommand("reference-check", "Compare Psi_n with the grid reference solver");
  auto* dump = app.add_subcommand("dump-symbolic", "Series components as exact JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, std::string("usage: ") + e.what());
    return kExitConfig;
  }

  try {
    const ProblemSpec problem = build_problem(s);
    auto meta = metadata(app.get_subcommands().front()->get_name(), s);
    std::string text;
    if (density->parsed()) {
      text = render(cmd_density(problem, s, out), meta, s.format);
    } else if (table->parsed()) {
      text = render(cmd_error_table(problem, s, out), meta, s.format);
    } else if (moments->parsed()) {
      text = render(cmd_moments(problem, s, out), meta, s.format);
    } else if (bounds->parsed()) {
      const Frame frame = cmd_bounds(problem, s, out, meta);
      text = render(frame, meta, s.format);
    } else if (reference->parsed()) {
      text = render(cmd_reference_check(problem, s, out), meta, s.format);
    } else if (dump->parsed()) {
      Settings quiet = s;
      quiet.dump.clear();
      text = is_2d(problem) ? symbolic_text(solve<2>(problem, quiet, out)) : symbolic_text(solve<1>(problem, quiet, out));
    }
    write_text(s.out, text, out);
    return kExitOk;
  } catch (const Error& e) {
    diagnose(err, e.what());
    return exit_code(e.kind());
  } catch (const IoError& e) {
    diagnose(err, std::string("I/O error: ") + e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    diagnose(err, e.what());
    return kExitEngine;
  }
}

}  // namespace pbe::cli
