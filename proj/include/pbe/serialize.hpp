#ifndef PBE_SERIALIZE_HPP
#define PBE_SERIALIZE_HPP

// JSON form of a symbolic density:
//   [{"rate": "a" | ["a", "b"],
//     "monomials": [{"coeff": "p/q", "xpow": i, ("ypow": j,) "tpow": k}, ...]}, ...]
// Rationals are strings so that no precision is lost.

#include <json.hpp>

#include "pbe/polyexp.hpp"
#include "pbe/series.hpp"

namespace pbe {

nlohmann::ordered_json to_json(const PolyExp1D& f);
nlohmann::ordered_json to_json(const PolyExp2D& f);

/// Parse errors (wrong shape, bad rational, negative power) throw Parse.
PolyExp1D polyexp1d_from_json(const nlohmann::json& j);
PolyExp2D polyexp2d_from_json(const nlohmann::json& j);

/// {"method": ..., "components": [v_0, v_1, ...]}
template <std::size_t Dim>
nlohmann::ordered_json to_json(const SeriesSolution<Dim>& series);

}  // namespace pbe

#endif  // PBE_SERIALIZE_HPP
