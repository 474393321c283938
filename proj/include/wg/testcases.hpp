#ifndef WG_TESTCASES_HPP
#define WG_TESTCASES_HPP

#include "wg/analysis.hpp"
#include "wg/solver.hpp"

namespace wg {

/// A Brinkman problem paired with its exact solution, for convergence runs.
struct TestCase {
  BrinkmanProblem problem;
  VectorFun exact_u;
  ScalarFun exact_p;
};

/// Manufactured smooth case on the unit square:
///   u = (sin(2 pi x) cos(2 pi y), -cos(2 pi x) sin(2 pi y)),  p = x^2 y^2 - 1/9,
///   kappa^{-1} = a (sin(2 pi x) + 1.1).
/// The source is built with the inverse-permeability sample the assembly
/// passes in, so the pair above solves exactly the problem the discretization
/// poses in either sampling mode.
inline TestCase manufactured_case(double a, double mu, bool stab_visc_scaling = false) {
  TestCase tc;
  tc.exact_u = [](const Vec2& p) {
    return Vec2(std::sin(2.0 * M_PI * p.x()) * std::cos(2.0 * M_PI * p.y()),
                -std::cos(2.0 * M_PI * p.x()) * std::sin(2.0 * M_PI * p.y()));
  };
  tc.exact_p = [](const Vec2& p) { return square(p.x()) * square(p.y()) - 1.0 / 9.0; };

  tc.problem.mu = mu;
  tc.problem.permeability = PermeabilityField::sine(a);
  tc.problem.stab_visc_scaling = stab_visc_scaling;
  tc.problem.g = tc.exact_u;
  const VectorFun exact_u = tc.exact_u;
  tc.problem.f = [mu, exact_u](const Vec2& p, double inv_kappa_cell) {
    const Vec2 u = exact_u(p);
    const Vec2 grad_p(2.0 * p.x() * square(p.y()), 2.0 * square(p.x()) * p.y());
    // -mu Lap(u) = 8 pi^2 mu u for this velocity.
    return Vec2(8.0 * M_PI * M_PI * mu * u + grad_p + mu * inv_kappa_cell * u);
  };
  return tc;
}

/// Driven flow through a porous medium: no source, velocity g on the whole
/// boundary (or only on the top wall when top_only is set).  Media given as
/// rasters are piecewise constant, so the permeability is frozen per element
/// at its centroid value.
inline BrinkmanProblem porous_flow_problem(PermeabilityField permeability, double mu,
                                           double lid_speed, bool top_only = false,
                                           bool stab_visc_scaling = false) {
  BrinkmanProblem problem;
  problem.mu = mu;
  problem.permeability = std::move(permeability);
  problem.kappa_sampling = KappaSampling::centroid;
  problem.stab_visc_scaling = stab_visc_scaling;
  problem.f = nullptr;
  problem.g = [lid_speed, top_only](const Vec2& p) {
    if (top_only && p.y() < 1.0 - 1e-12) return Vec2(0.0, 0.0);
    return Vec2(lid_speed, 0.0);
  };
  return problem;
}

struct CaseRun {
  ErrorRow errors;
  SolveReport solve;
};

/// Solves a test case on the structured n x n mesh and measures all errors.
inline CaseRun run_case(const TestCase& tc, int n, int order = 1,
                        Diagonal diagonal = Diagonal::ne_sw,
                        const SolveOptions& options = {}) {
  const Mesh mesh = build_structured(n, diagonal);
  const FeSpace space(mesh, order);
  const SaddleSystem system = assemble(space, tc.problem);
  const SolveResult result = solve(system, options);
  CaseRun run;
  run.errors = errors_vs_exact(space, tc.problem, result.velocity, result.pressure,
                               tc.exact_u, tc.exact_p);
  // Tables index rows by the grid spacing of the structured mesh, not by the
  // element diameter (they differ by the constant factor sqrt(2)).
  run.errors.h = 1.0 / n;
  run.solve = result.report;
  return run;
}

/// Errors over a family of structured meshes, finest last.
inline ErrorReport convergence_study(const TestCase& tc, const std::vector<int>& sizes,
                                     int order = 1, Diagonal diagonal = Diagonal::ne_sw,
                                     const SolveOptions& options = {}) {
  ErrorReport report;
  for (int n : sizes) report.rows.push_back(run_case(tc, n, order, diagonal, options).errors);
  return report;
}

}  // namespace wg

#endif
