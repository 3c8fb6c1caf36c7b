#include "pbe/serialize.hpp"

#include <string>

#include "pbe/error.hpp"
#include "pbe/rational.hpp"

namespace pbe {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::Parse, "symbolic JSON: " + what); }

Rational rational_field(const json& j, const char* what) {
  if (!j.is_string()) parse_error(std::string(what) + " must be a string");
  return parse_rational(j.get<std::string>());
}

std::uint32_t power_field(const json& m, const char* key) {
  const auto it = m.find(key);
  if (it == m.end()) parse_error(std::string("monomial lacks \"") + key + "\"");
  if (!it->is_number_unsigned()) parse_error(std::string("\"") + key + "\" must be a nonnegative integer");
  const auto value = it->get<std::uint64_t>();
  if (value > exponent_cap()) parse_error(std::string("\"") + key + "\" exceeds the exponent cap");
  return static_cast<std::uint32_t>(value);
}

template <std::size_t Dim>
ordered_json dump(const PolyExp<Dim>& f) {
  ordered_json out = ordered_json::array();
  for (const auto& [rate, poly] : f.terms()) {
    ordered_json block;
    if constexpr (Dim == 1) {
      block["rate"] = to_string(rate[0]);
    } else {
      block["rate"] = ordered_json::array({to_string(rate[0]), to_string(rate[1])});
    }
    ordered_json monomials = ordered_json::array();
    for (const auto& [powers, coeff] : poly) {
      ordered_json m;
      m["coeff"] = to_string(coeff);
      m["xpow"] = powers[0];
      if constexpr (Dim == 2) m["ypow"] = powers[1];
      m["tpow"] = powers[Dim];
      monomials.push_back(std::move(m));
    }
    block["monomials"] = std::move(monomials);
    out.push_back(std::move(block));
  }
  return out;
}

template <std::size_t Dim>
PolyExp<Dim> load(const json& j) {
  if (!j.is_array()) parse_error("top level must be an array of rate blocks");
  PolyExpBuilder<Dim> builder;
  for (const auto& block : j) {
    if (!block.is_object() || !block.contains("rate") || !block.contains("monomials")) {
      parse_error("rate block needs \"rate\" and \"monomials\"");
    }
    typename PolyExp<Dim>::Rate rate;
    const auto& r = block["rate"];
    if constexpr (Dim == 1) {
      rate[0] = rational_field(r, "rate");
    } else {
      if (!r.is_array() || r.size() != 2) parse_error("bivariate rate must be a pair");
      rate[0] = rational_field(r[0], "rate");
      rate[1] = rational_field(r[1], "rate");
    }
    for (const auto& a : rate) {
      if (a < 0) parse_error("rates must be nonnegative");
    }
    const auto& monomials = block["monomials"];
    if (!monomials.is_array()) parse_error("\"monomials\" must be an array");
    for (const auto& m : monomials) {
      if (!m.is_object() || !m.contains("coeff")) parse_error("monomial lacks \"coeff\"");
      typename PolyExp<Dim>::Exponents powers{};
      powers[0] = power_field(m, "xpow");
      if constexpr (Dim == 2) powers[1] = power_field(m, "ypow");
      powers[Dim] = power_field(m, "tpow");
      builder.add(rate, powers, rational_field(m["coeff"], "coeff"));
    }
  }
  return std::move(builder).build();
}

}  // namespace

ordered_json to_json(const PolyExp1D& f) { return dump(f); }
ordered_json to_json(const PolyExp2D& f) { return dump(f); }

PolyExp1D polyexp1d_from_json(const json& j) { return load<1>(j); }
PolyExp2D polyexp2d_from_json(const json& j) { return load<2>(j); }

template <std::size_t Dim>
ordered_json to_json(const SeriesSolution<Dim>& series) {
  ordered_json out;
  out["method"] = std::string(to_string(series.method()));
  out["order"] = series.order();
  ordered_json components = ordered_json::array();
  for (const auto& v : series.components()) components.push_back(to_json(v));
  out["components"] = std::move(components);
  return out;
}

template ordered_json to_json(const SeriesSolution<1>&);
template ordered_json to_json(const SeriesSolution<2>&);

}  // namespace pbe
