#ifndef WG_COMMON_HPP
#define WG_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace wg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Problem data fails a validity requirement (non-positive viscosity,
/// non-positive permeability sample, missing boundary data).
struct InvalidProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input file or option string cannot be parsed; the message carries the
/// source location (path:line or option name).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed input is well-formed but semantically unusable (e.g. a raster
/// that maps to a non-positive inverse permeability).
struct InvalidData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Iterative solve exhausted its budget; carries the best residual reached.
struct SolveFailure : std::runtime_error {
  SolveFailure(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), best_residual(residual), iterations(iterations) {}
  double best_residual;
  int iterations;
};

/// The assembled system is singular (or a factorization broke down).
struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A condition the library guarantees internally was violated.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

inline double square(double x) { return x * x; }

}  // namespace wg

#endif
