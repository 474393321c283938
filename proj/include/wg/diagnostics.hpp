#ifndef WG_DIAGNOSTICS_HPP
#define WG_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wg/analysis.hpp"
#include "wg/assembly.hpp"
#include "wg/mesh.hpp"
#include "wg/problem.hpp"
#include "wg/quadrature.hpp"
#include "wg/solver.hpp"
#include "wg/space.hpp"
#include "wg/testcases.hpp"

namespace wg {

/// Deliberate corruptions for exercising the diagnostics themselves.
enum class FaultInjection { none, edge_sign };

struct CheckResult {
  std::string name;
  double observed = 0.0;
  double bound = 0.0;
  bool pass() const { return observed <= bound; }
};

namespace detail {

/// Flips one interior edge incidence sign; the weak operators built on the
/// corrupted mesh violate the flux identity and commutativity.
inline void inject_edge_sign_fault(Mesh& mesh) {
  for (int t = 0; t < mesh.n_elements(); ++t) {
    for (size_t i = 0; i < mesh.element_edges[t].size(); ++i) {
      if (!mesh.edge_on_boundary(mesh.element_edges[t][i])) {
        mesh.element_edge_signs[t][i] = -mesh.element_edge_signs[t][i];
        return;
      }
    }
  }
}

}  // namespace detail

/// Self-contained consistency checks of the discretization on a small mesh:
/// quadrature exactness, mesh integrity, the commuting property of the weak
/// operators, the flux identity, the coercivity identity a(v,v) = |||v|||^2,
/// boundedness, exact reproduction of polynomial solutions, and the
/// divergence-free residual of a solve.
inline std::vector<CheckResult> run_diagnostics(int order, unsigned seed,
                                                FaultInjection fault = FaultInjection::none) {
  std::vector<CheckResult> results;
  const auto add = [&results](const std::string& name, double observed, double bound) {
    results.push_back({name, observed, bound});
  };

  {
    double worst = 0.0;
    for (int degree = 1; degree <= 12; ++degree) {
      worst = std::max(worst, triangle_rule_self_test(triangle_rule(degree)));
      worst = std::max(worst, segment_rule_self_test(segment_rule(degree)));
    }
    add("quadrature exactness", worst, 1e-13);
  }

  Mesh mesh = build_structured(8);
  if (fault == FaultInjection::edge_sign) detail::inject_edge_sign_fault(mesh);

  {
    const int euler = mesh.n_vertices() - mesh.n_edges() + mesh.n_elements();
    double worst = std::abs(euler - 1);
    double area = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) area += mesh.element_area[t];
    worst = std::max(worst, std::abs(area - 1.0));
    for (int t = 0; t < mesh.n_elements(); ++t) {
      Vec2 normal_sum(0.0, 0.0);
      for (size_t i = 0; i < mesh.element_edges[t].size(); ++i) {
        const int e = mesh.element_edges[t][i];
        normal_sum += mesh.element_edge_signs[t][i] * mesh.edge_length[e] *
                      mesh.edge_normal[e];
      }
      worst = std::max(worst, normal_sum.norm());
    }
    add("mesh integrity", worst, 1e-12);
  }

  const FeSpace space(mesh, order);
  std::mt19937_64 rng(seed);

  {
    const CommutativityResult result = verify_commutativity(space, 100, seed);
    add("commutativity of weak gradient", result.worst_gradient, 1e-11);
    add("commutativity of weak divergence", result.worst_divergence, 1e-11);
  }

  BrinkmanProblem reference;
  reference.mu = 0.7;
  reference.permeability = PermeabilityField::constant(2.5);
  reference.g = [](const Vec2&) { return Vec2(0.0, 0.0); };

  {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const PressureField q = random_pressure(space, rng);
      const WgVelocity flux = artificial_flux(space, reference, q);
      const double seminorm_sq = square(pressure_seminorm(space, reference, q));
      worst = std::max(worst,
                       std::abs(b_form(space, flux, q) - seminorm_sq) / seminorm_sq);
    }
    add("artificial flux identity", worst, 1e-10);
  }

  {
    const SaddleSystem system = assemble(space, reference);
    double worst_coercivity = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const WgVelocity v = random_velocity(space, rng, true);
      Eigen::VectorXd reduced(system.n_velocity_reduced());
      for (int r = 0; r < system.n_velocity_reduced(); ++r) {
        const int full = system.reduced_to_full[r];
        reduced[r] =
            full < system.dofs.v0_total() ? v.v0[full] : v.vb[full - system.dofs.v0_total()];
      }
      const double quad_form = reduced.dot(system.A * reduced);
      const double norm_sq = square(triple_bar_norm(space, reference, v));
      worst_coercivity = std::max(worst_coercivity, std::abs(quad_form - norm_sq) / norm_sq);
    }
    add("coercivity identity", worst_coercivity, 1e-10);

    double worst_bound = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const WgVelocity v = random_velocity(space, rng, true);
      const WgVelocity w = random_velocity(space, rng, true);
      Eigen::VectorXd rv(system.n_velocity_reduced()), rw(system.n_velocity_reduced());
      for (int r = 0; r < system.n_velocity_reduced(); ++r) {
        const int full = system.reduced_to_full[r];
        const int nv0 = system.dofs.v0_total();
        rv[r] = full < nv0 ? v.v0[full] : v.vb[full - nv0];
        rw[r] = full < nv0 ? w.v0[full] : w.vb[full - nv0];
      }
      const double cross = std::abs(rv.dot(system.A * rw));
      const double bound =
          triple_bar_norm(space, reference, v) * triple_bar_norm(space, reference, w);
      worst_bound = std::max(worst_bound, cross / bound);
    }
    add("energy boundedness", worst_bound, 1.0 + 1e-10);
  }

  {
    // A linear divergence-free field with constant data is reproduced exactly.
    TestCase linear;
    linear.exact_u = [](const Vec2& p) {
      return Vec2(p.x() + 2.0 * p.y(), 3.0 * p.x() - p.y());
    };
    linear.exact_p = [](const Vec2&) { return 0.0; };
    linear.problem = reference;
    linear.problem.g = linear.exact_u;
    const VectorFun exact_u = linear.exact_u;
    const double mu = linear.problem.mu;
    linear.problem.f = [exact_u, mu](const Vec2& p, double inv_kappa) {
      return Vec2(mu * inv_kappa * exact_u(p));
    };

    SolveOptions options;
    options.method = SolveMethod::direct;
    const SaddleSystem system = assemble(space, linear.problem);
    const SolveResult result = solve(system, options);
    const ErrorRow errors = errors_vs_exact(space, linear.problem, result.velocity,
                                            result.pressure, linear.exact_u, linear.exact_p);
    const double worst = std::max({errors.e_tbar, errors.e_l2proj, errors.e_l2, errors.e_press});
    add("polynomial exactness", worst, 1e-9);

    const double scale = std::max(1.0, system.full_rhs().norm());
    add("divergence-free residual", result.report.divergence_residual,
        100.0 * options.tolerance * scale);
  }

  return results;
}

}  // namespace wg

#endif
