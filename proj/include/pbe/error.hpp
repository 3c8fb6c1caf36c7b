#ifndef PBE_ERROR_HPP
#define PBE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pbe {

enum class ErrorKind {
  MixedRates,       // convolution of terms with unequal exponential rates
  ZeroRate,         // full-line integral of a term without exponential decay
  OutOfClass,       // result would leave the polynomial-exponential class
  DegreeOverflow,   // an exponent exceeded the configured cap
  TermBudget,       // series iteration exceeded its monomial budget
  IndexOutOfRange,
  NonConvergence,   // series evaluation hit its term cap before tolerance
  Unsupported2D,
  Instability,      // explicit time stepping blew up
  InvalidSpec,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedRates: return "MixedRates";
    case ErrorKind::ZeroRate: return "ZeroRate";
    case ErrorKind::OutOfClass: return "OutOfClass";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::TermBudget: return "TermBudget";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::Unsupported2D: return "Unsupported2D";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pbe

#endif  // PBE_ERROR_HPP
