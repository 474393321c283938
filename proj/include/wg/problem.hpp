#ifndef WG_PROBLEM_HPP
#define WG_PROBLEM_HPP

#include <cmath>
#include <functional>
#include <string>

#include "wg/common.hpp"

namespace wg {

/// Scalar inverse permeability field kappa^{-1}(x) with its recorded
/// ellipticity bounds lambda_min <= kappa^{-1} <= lambda_max.  How the solver
/// samples the field is controlled per problem (see KappaSampling).
struct PermeabilityField {
  std::function<double(const Vec2&)> inv_kappa;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  std::string kind = "constant";

  static PermeabilityField constant(double value) {
    PermeabilityField field;
    field.inv_kappa = [value](const Vec2&) { return value; };
    field.lambda_min = field.lambda_max = value;
    field.kind = "constant";
    return field;
  }

  /// kappa^{-1} = a (sin(2 pi x) + 1.1).
  static PermeabilityField sine(double a) {
    PermeabilityField field;
    field.inv_kappa = [a](const Vec2& p) { return a * (std::sin(2.0 * M_PI * p.x()) + 1.1); };
    field.lambda_min = 0.1 * a;
    field.lambda_max = 2.1 * a;
    field.kind = "sine";
    return field;
  }
};

/// Momentum source; the second argument is the inverse permeability sample
/// the assembly uses at the evaluation point, so manufactured sources stay
/// consistent with the discretized permeability model regardless of the
/// sampling mode.  Sources without that dependence simply ignore it.
using MomentumSource = std::function<Vec2(const Vec2&, double)>;

/// How the Darcy term samples kappa^{-1} during assembly and error
/// integration.  `quadrature` evaluates the field at every quadrature point
/// (the right choice for smooth analytic fields); `centroid` freezes one
/// value per element (the natural reading for piecewise-constant media such
/// as raster images, where each cell carries a single permeability).
enum class KappaSampling { quadrature, centroid };

/// Data of the Brinkman problem
///   -mu Lap(u) + grad p + mu kappa^{-1} u = f,  div u = 0,  u = g on the boundary.
struct BrinkmanProblem {
  double mu = 1.0;
  PermeabilityField permeability = PermeabilityField::constant(1.0);
  MomentumSource f;
  std::function<Vec2(const Vec2&)> g;

  /// Scale the stabilizer by mu instead of using the plain h^{-1} weight.
  /// The plain weight is the default: it keeps the interior/trace coupling
  /// strong for small viscosities, which is what preserves the optimal
  /// pressure and velocity rates in viscosity-robust convergence runs.
  bool stab_visc_scaling = false;

  /// Where the Darcy term samples kappa^{-1}.
  KappaSampling kappa_sampling = KappaSampling::quadrature;

  /// Inverse permeability at a point; rejects non-positive samples.
  double sample_inv_kappa(const Vec2& point) const {
    if (!permeability.inv_kappa) throw InvalidProblem("permeability field is not set");
    const double value = permeability.inv_kappa(point);
    if (!(value > 0.0))
      throw InvalidProblem("non-positive inverse permeability sample at (" +
                           std::to_string(point.x()) + ", " + std::to_string(point.y()) + ")");
    return value;
  }

  /// Sample used for the Darcy term at quadrature point `point` inside the
  /// element with centroid `centroid`, honoring the sampling mode.
  double darcy_sample(const Vec2& point, const Vec2& centroid) const {
    return sample_inv_kappa(kappa_sampling == KappaSampling::centroid ? centroid : point);
  }

  void validate() const {
    if (!(mu > 0.0)) throw InvalidProblem("viscosity must be positive");
    if (!permeability.inv_kappa) throw InvalidProblem("permeability field is not set");
    if (!(permeability.lambda_min > 0.0) || permeability.lambda_min > permeability.lambda_max)
      throw InvalidProblem("permeability bounds must satisfy 0 < lambda_min <= lambda_max");
  }
};

}  // namespace wg

#endif
