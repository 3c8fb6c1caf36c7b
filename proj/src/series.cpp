#include "pbe/series.hpp"

#include <string>

#include "pbe/error.hpp"

namespace pbe {

namespace {

template <std::size_t Dim>
const PolyExp<Dim>& initial(const ProblemSpec& problem) {
  if constexpr (Dim == 1) {
    return initial_condition_1d(problem);
  } else {
    return initial_condition_2d(problem);
  }
}

template <std::size_t Dim>
void check_budget(const PolyExp<Dim>& f, const SeriesOptions& options, std::size_t k) {
  if (f.term_count() > options.term_budget) {
    throw Error(ErrorKind::TermBudget, "partial sum " + std::to_string(k) + " holds " +
                                           std::to_string(f.term_count()) + " monomials (budget " +
                                           std::to_string(options.term_budget) + ")");
  }
}

// Bilinear part of the right-hand side, Q(u, w).
template <std::size_t Dim>
PolyExp<Dim> bilinear(const ProblemSpec& problem, const PolyExp<Dim>& u, const PolyExp<Dim>& w) {
  if constexpr (Dim == 2) {
    return coag2d_bilinear(u, w);
  } else {
    if (const auto* p = std::get_if<Coag1D>(&problem)) return coag_bilinear(p->kernel, u, w);
    if (const auto* p = std::get_if<CCFE>(&problem)) return coag_bilinear(p->kernel, u, w);
    return {};
  }
}

template <std::size_t Dim>
PolyExp<Dim> linear(const ProblemSpec& problem, const PolyExp<Dim>& u) {
  if constexpr (Dim == 1) {
    if (const auto* p = std::get_if<Frag>(&problem)) return frag_rhs(p->frag, u);
    if (const auto* p = std::get_if<CCFE>(&problem)) return frag_rhs(p->frag, u);
  }
  return {};
}

}  // namespace

std::string_view to_string(Method method) {
  return method == Method::AHPETM ? "ahpetm" : "classical";
}

template <std::size_t Dim>
const PolyExp<Dim>& SeriesSolution<Dim>::component(std::size_t i) const {
  if (i >= components_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "component " + std::to_string(i) + " of a series of order " +
                                                std::to_string(order()));
  }
  return components_[i];
}

template <std::size_t Dim>
PolyExp<Dim> SeriesSolution<Dim>::truncated(std::size_t k) const {
  if (k >= components_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "truncation order " + std::to_string(k) + " exceeds series order " +
                                                std::to_string(order()));
  }
  PolyExpBuilder<Dim> b;
  for (std::size_t i = 0; i <= k; ++i) b.add(components_[i]);
  return std::move(b).build();
}

template <std::size_t Dim>
SeriesSolution<Dim> iterate_ahpetm(const ProblemSpec& problem, std::size_t n, const SeriesOptions& options) {
  validate(problem);
  const PolyExp<Dim>& u0 = initial<Dim>(problem);
  std::vector<PolyExp<Dim>> components{u0};
  components.reserve(n + 1);
  PolyExp<Dim> partial = u0;
  PolyExp<Dim> previous_rhs;
  for (std::size_t k = 0; k < n; ++k) {
    PolyExp<Dim> current_rhs = rhs(problem, partial);
    PolyExp<Dim> v = time_antiderivative(sub(current_rhs, previous_rhs));
    partial = add(partial, v);
    check_budget(partial, options, k + 1);
    components.push_back(std::move(v));
    previous_rhs = std::move(current_rhs);
  }
  return SeriesSolution<Dim>(problem, Method::AHPETM, std::move(components));
}

template <std::size_t Dim>
SeriesSolution<Dim> iterate_classical(const ProblemSpec& problem, std::size_t n, const SeriesOptions& options) {
  validate(problem);
  std::vector<PolyExp<Dim>> components{initial<Dim>(problem)};
  components.reserve(n + 1);
  std::size_t terms = components.front().term_count();
  for (std::size_t k = 0; k < n; ++k) {
    PolyExpBuilder<Dim> a_k;
    for (std::size_t i = 0; i <= k; ++i) a_k.add(bilinear<Dim>(problem, components[i], components[k - i]));
    a_k.add(linear<Dim>(problem, components[k]));
    PolyExp<Dim> v = time_antiderivative(std::move(a_k).build());
    terms += v.term_count();
    if (terms > options.term_budget) {
      throw Error(ErrorKind::TermBudget, "classical series exceeded budget of " +
                                             std::to_string(options.term_budget) + " monomials");
    }
    components.push_back(std::move(v));
  }
  return SeriesSolution<Dim>(problem, Method::ClassicalADM, std::move(components));
}

template class SeriesSolution<1>;
template class SeriesSolution<2>;
template Series1D iterate_ahpetm<1>(const ProblemSpec&, std::size_t, const SeriesOptions&);
template Series2D iterate_ahpetm<2>(const ProblemSpec&, std::size_t, const SeriesOptions&);
template Series1D iterate_classical<1>(const ProblemSpec&, std::size_t, const SeriesOptions&);
template Series2D iterate_classical<2>(const ProblemSpec&, std::size_t, const SeriesOptions&);

}  // namespace pbe
