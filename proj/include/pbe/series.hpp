#ifndef PBE_SERIES_HPP
#define PBE_SERIES_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "pbe/polyexp.hpp"
#include "pbe/problems.hpp"

namespace pbe {

enum class Method {
  AHPETM,        // accelerated He polynomials with the Elzaki time operator
  ClassicalADM,  // ADM/HPM bilinear expansion, the baseline
};

std::string_view to_string(Method method);

struct SeriesOptions {
  /// Abort once a partial sum holds more monomials than this.
  std::size_t term_budget = 200'000;
};

/// Components v_0 ... v_n of a truncated series. Read-only once built.
template <std::size_t Dim>
class SeriesSolution {
 public:
  SeriesSolution(ProblemSpec problem, Method method, std::vector<PolyExp<Dim>> components)
      : problem_(std::move(problem)), method_(method), components_(std::move(components)) {}

  const ProblemSpec& problem() const { return problem_; }
  Method method() const { return method_; }
  const std::vector<PolyExp<Dim>>& components() const { return components_; }
  const PolyExp<Dim>& component(std::size_t i) const;
  /// Index of the last component.
  std::size_t order() const { return components_.size() - 1; }

  /// Psi_k = v_0 + ... + v_k. IndexOutOfRange for k > order().
  PolyExp<Dim> truncated(std::size_t k) const;

 private:
  ProblemSpec problem_;
  Method method_;
  std::vector<PolyExp<Dim>> components_;
};

using Series1D = SeriesSolution<1>;
using Series2D = SeriesSolution<2>;

/// v_0 = u_0 and v_{k+1} = T[rhs(Psi_k) - rhs(Psi_{k-1})] with T the time
/// antiderivative, which telescopes to Psi_{k+1} = u_0 + T[rhs(Psi_k)].
template <std::size_t Dim>
SeriesSolution<Dim> iterate_ahpetm(const ProblemSpec& problem, std::size_t n, const SeriesOptions& options = {});

/// v_{k+1} = T[A_k], A_k = sum_{i+j=k} Q(v_i, v_j) + frag_rhs(v_k).
template <std::size_t Dim>
SeriesSolution<Dim> iterate_classical(const ProblemSpec& problem, std::size_t n, const SeriesOptions& options = {});

template <std::size_t Dim>
SeriesSolution<Dim> iterate(const ProblemSpec& problem, Method method, std::size_t n,
                            const SeriesOptions& options = {}) {
  return method == Method::AHPETM ? iterate_ahpetm<Dim>(problem, n, options)
                                  : iterate_classical<Dim>(problem, n, options);
}

}  // namespace pbe

#endif  // PBE_SERIES_HPP
