#ifndef PBE_TOOLS_CLI_HPP
#define PBE_TOOLS_CLI_HPP

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "pbe/exact.hpp"
#include "pbe/polyexp.hpp"
#include "pbe/problems.hpp"

namespace pbe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitEngine = 3;
inline constexpr int kExitIo = 4;

/// Runs `pbesolve` with the given arguments (argv[0] is the program name).
/// Data goes to `out` unless --out is given; diagnostics go to `err` as a
/// single line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "a:b:step" (inclusive, generated in exact arithmetic) or "v1,v2,...".
std::vector<double> parse_grid(std::string_view text);

/// exp:a | monoexp:c,p,a, joined by '+'.
PolyExp1D parse_u0_1d(std::string_view text);
/// monoexp2:c,px,py,ax,ay, joined by '+'.
PolyExp2D parse_u0_2d(std::string_view text);
/// "c,r,s,k".
FragSpec parse_frag(std::string_view text);

/// The closed-form solution whose initial condition and mechanisms coincide
/// with `problem`, if one is known.
std::optional<ExactSolution> infer_exact(const ProblemSpec& problem);

}  // namespace pbe::cli

#endif  // PBE_TOOLS_CLI_HPP
