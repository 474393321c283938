#ifndef WG_ANALYSIS_HPP
#define WG_ANALYSIS_HPP

#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "wg/problem.hpp"
#include "wg/projection.hpp"
#include "wg/space.hpp"

namespace wg {

/// Evaluates a velocity's interior polynomial on element t at a point.
inline Vec2 eval_interior(const FeSpace& space, int t, const WgVelocity& v, const Vec2& p) {
  const ElementBasis basis = space.element_basis(t, space.order());
  const Eigen::VectorXd phi = basis.eval(p);
  const int np = basis.size();
  const auto block = v.v0.segment(space.dofs().v0_offset(t), 2 * np);
  return Vec2(block.segment(0, np).dot(phi), block.segment(np, np).dot(phi));
}

/// Evaluates a velocity's trace polynomial on edge e at arc-length parameter s.
inline Vec2 eval_trace(const FeSpace& space, int e, const WgVelocity& v, double s) {
  const EdgeBasis basis = space.edge_basis();
  const Eigen::VectorXd phi = basis.eval(s);
  const int ne = basis.size();
  const auto block = v.vb.segment(space.dofs().vb_offset(e) - space.dofs().v0_total(), 2 * ne);
  return Vec2(block.segment(0, ne).dot(phi), block.segment(ne, ne).dot(phi));
}

/// Evaluates a pressure's polynomial on element t at a point.
inline double eval_pressure(const FeSpace& space, int t, const PressureField& p,
                            const Vec2& point) {
  const ElementBasis basis = space.element_basis(t, space.order() - 1);
  return p.coeffs.segment(space.dofs().p_offset(t), basis.size()).dot(basis.eval(point));
}

/// Gradient of a pressure's polynomial on element t at a point.
inline Vec2 eval_pressure_grad(const FeSpace& space, int t, const PressureField& p,
                               const Vec2& point) {
  const ElementBasis basis = space.element_basis(t, space.order() - 1);
  const Eigen::MatrixXd grads = basis.eval_grad(point);
  const auto coeffs = p.coeffs.segment(space.dofs().p_offset(t), basis.size());
  return Vec2(coeffs.dot(grads.col(0)), coeffs.dot(grads.col(1)));
}

namespace detail {

/// Squared energy parts of a velocity: .first is the viscous weak-gradient
/// term plus the Darcy mass term (weights and samples as assembled), .second
/// is the stabilizer sum including its configured scaling.
inline std::pair<double, double> energy_parts(const FeSpace& space,
                                              const BrinkmanProblem& problem,
                                              const WgVelocity& v) {
  const Mesh& mesh = space.mesh();
  const int npm = poly_dim(space.order() - 1);
  const double stab_weight = problem.stab_visc_scaling ? problem.mu : 1.0;
  double smooth = 0.0;
  double stab = 0.0;

  std::vector<Vec2> points;
  std::vector<double> weights;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const Vec2 centroid = mesh.element_centroid[t];

    // Viscous part: integrate |grad_w v|^2 as a quadrature of the P_{k-1}
    // polynomial reconstructed from the weak-gradient coefficients.
    const Eigen::MatrixXd grad_coeffs = weak_gradient(space, t, v);
    const ElementBasis bm = space.element_basis(t, space.order() - 1);
    space.element_quadrature(t, space.triangle_rule_assembly(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const Eigen::VectorXd phi_m = bm.eval(points[q]);
      double grad_sq = 0.0;
      for (int block = 0; block < 4; ++block) {
        grad_sq += square(grad_coeffs.row(block).head(npm).dot(phi_m));
      }
      smooth += weights[q] * problem.mu * grad_sq;
    }

    // Darcy mass part, on the same rule the assembled form uses.
    space.element_quadrature(t, space.triangle_rule_data(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const Vec2 v0 = eval_interior(space, t, v, points[q]);
      const double inv_kappa = problem.darcy_sample(points[q], centroid);
      smooth += weights[q] * problem.mu * inv_kappa * v0.squaredNorm();
    }

    // Stabilizer part: h_T^{-1} edge integrals of |v0 - vb|^2.
    const double inv_h = 1.0 / mesh.element_diameter[t];
    const SegmentQuadrature& seg = space.segment_rule_assembly();
    for (int e : mesh.element_edges[t]) {
      for (size_t q = 0; q < seg.points.size(); ++q) {
        const double s = seg.points[q];
        const Vec2 diff =
            eval_interior(space, t, v, mesh.edge_point(e, s)) - eval_trace(space, e, v, s);
        stab += stab_weight * inv_h * seg.weights[q] * mesh.edge_length[e] *
                diff.squaredNorm();
      }
    }
  }
  return {smooth, stab};
}

}  // namespace detail

/// Energy norm |||v|||: viscous weak-gradient part, Darcy mass part (sampled
/// per the problem's mode, so the norm matches the assembled form a(.,.)),
/// and the stabilizer, each weighted as in the bilinear form of the problem.
inline double triple_bar_norm(const FeSpace& space, const BrinkmanProblem& problem,
                              const WgVelocity& v) {
  const auto [smooth, stab] = detail::energy_parts(space, problem, v);
  return std::sqrt(smooth + stab);
}

/// Energy seminorm without the stabilizer: sqrt of the viscous weak-gradient
/// term plus the Darcy mass term.  This is the velocity-energy quantity the
/// convergence tables report; the stabilizer gap |v0 - vb| is a solver-
/// internal coupling measure and is excluded from the reported error.
inline double energy_error(const FeSpace& space, const BrinkmanProblem& problem,
                           const WgVelocity& v) {
  return std::sqrt(detail::energy_parts(space, problem, v).first);
}

/// Discrete H1 velocity norm: ||grad_w v||^2 plus the unweighted stabilizer.
inline double velocity_h1_norm(const FeSpace& space, const WgVelocity& v) {
  BrinkmanProblem unit;
  unit.mu = 1.0;
  unit.permeability = PermeabilityField::constant(1.0);
  unit.stab_visc_scaling = false;
  const Mesh& mesh = space.mesh();
  // |||v|||^2 with mu = kappa^{-1} = 1 equals ||grad_w v||^2 + stabilizer +
  // ||v0||^2, so subtract the mass part.
  double mass = 0.0;
  std::vector<Vec2> points;
  std::vector<double> weights;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    space.element_quadrature(t, space.triangle_rule_assembly(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      mass += weights[q] * eval_interior(space, t, v, points[q]).squaredNorm();
    }
  }
  const double full = triple_bar_norm(space, unit, v);
  return std::sqrt(std::max(0.0, full * full - mass));
}

/// Pressure jump [q] across interior edge e at arc-length parameter s: the
/// value on the element whose outward normal is the global edge normal minus
/// the value on the other element.
inline double pressure_jump(const FeSpace& space, int e, const PressureField& q, double s) {
  const Mesh& mesh = space.mesh();
  const int t0 = mesh.edge_elements[e][0];
  const int t1 = mesh.edge_elements[e][1];
  const Vec2 x = mesh.edge_point(e, s);
  const double q0 = eval_pressure(space, t0, q, x);
  const double q1 = eval_pressure(space, t1, q, x);
  return mesh.edge_sign_in(t0, e) > 0 ? q0 - q1 : q1 - q0;
}

/// Weighted discrete H1 pressure seminorm: element terms ||kappa^{1/2} grad q||
/// plus h^{-1}-weighted squared jumps over interior edges (h the mesh size).
/// Uses the per-element (centroid) permeability sample regardless of the
/// problem's sampling mode, mirroring artificial_flux so the pairing identity
/// b(F(q), q) = |q|^2 holds exactly.
inline double pressure_seminorm(const FeSpace& space, const BrinkmanProblem& problem,
                                const PressureField& q) {
  const Mesh& mesh = space.mesh();
  const double inv_h = 1.0 / mesh.max_diameter();
  double total = 0.0;
  std::vector<Vec2> points;
  std::vector<double> weights;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const double kappa = 1.0 / problem.sample_inv_kappa(mesh.element_centroid[t]);
    space.element_quadrature(t, space.triangle_rule_assembly(), points, weights);
    for (size_t qp = 0; qp < points.size(); ++qp) {
      total += weights[qp] * kappa * eval_pressure_grad(space, t, q, points[qp]).squaredNorm();
    }
  }
  const SegmentQuadrature& seg = space.segment_rule_assembly();
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_on_boundary(e)) continue;
    for (size_t qp = 0; qp < seg.points.size(); ++qp) {
      total += inv_h * seg.weights[qp] * mesh.edge_length[e] *
               square(pressure_jump(space, e, q, seg.points[qp]));
    }
  }
  return std::sqrt(total);
}

/// Artificial flux of a pressure field: interior part -kappa grad q per
/// element (kappa the per-element centroid sample, as in pressure_seminorm),
/// trace part h^{-1} [q] n_e per interior edge, zero trace on the boundary.
/// Pairs with b(., q) to reproduce the squared pressure seminorm.
inline WgVelocity artificial_flux(const FeSpace& space, const BrinkmanProblem& problem,
                                  const PressureField& q) {
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();
  const double inv_h = 1.0 / mesh.max_diameter();
  WgVelocity flux = WgVelocity::zero(dofs);

  for (int t = 0; t < mesh.n_elements(); ++t) {
    const double kappa = 1.0 / problem.sample_inv_kappa(mesh.element_centroid[t]);
    flux.v0.segment(dofs.v0_offset(t), dofs.v0_per_element) = project_interior_element(
        space, t,
        [&](const Vec2& x) { return Vec2(-kappa * eval_pressure_grad(space, t, q, x)); });
  }
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_on_boundary(e)) continue;
    const Vec2 normal = mesh.edge_normal[e];
    // Recover the arc-length parameter to evaluate the one-dimensional jump.
    const Vec2 lo = mesh.vertices[mesh.edge_vertices[e][0]];
    const Vec2 hi = mesh.vertices[mesh.edge_vertices[e][1]];
    const Vec2 dir = hi - lo;
    const double len_sq = dir.squaredNorm();
    flux.vb.segment(dofs.vb_offset(e) - dofs.v0_total(), dofs.vb_per_edge) =
        project_trace_edge(space, e, [&](const Vec2& x) {
          const double s = (x - mesh.edge_midpoint(e)).dot(dir) / len_sq;
          return Vec2(inv_h * pressure_jump(space, e, q, s) * normal);
        });
  }
  return flux;
}

/// b(v, q) = sum_T (div_w v, q)_T.
inline double b_form(const FeSpace& space, const WgVelocity& v, const PressureField& q) {
  const DofMap& dofs = space.dofs();
  double total = 0.0;
  for (int t = 0; t < space.mesh().n_elements(); ++t) {
    const LocalOperators ops = space.local_operators(t);
    const Eigen::VectorXd moments = ops.div_moments * space.local_velocity_coeffs(t, v);
    total += moments.dot(q.coeffs.segment(dofs.p_offset(t), dofs.p_per_element));
  }
  return total;
}

/// max over elements and pressure basis functions of |(div_w v, q)_T|.
inline double divergence_free_residual(const FeSpace& space, const WgVelocity& v) {
  double worst = 0.0;
  for (int t = 0; t < space.mesh().n_elements(); ++t) {
    const LocalOperators ops = space.local_operators(t);
    const Eigen::VectorXd moments = ops.div_moments * space.local_velocity_coeffs(t, v);
    worst = std::max(worst, moments.cwiseAbs().maxCoeff());
  }
  return worst;
}

struct ErrorRow {
  double h = 0.0;           // mesh-size parameter of the row (grid spacing for structured runs)
  double e_tbar = 0.0;      // energy error of Q_h u - u_h (see energy_error)
  double e_l2proj = 0.0;    // ||Q_0 u - u_0||
  double e_l2 = 0.0;        // ||u - u_0||
  double e_press = 0.0;     // ||Q_h p - p_h||
  double e_weighted = 0.0;  // ||kappa^{-1/2} (u - u_0)||

  std::array<double, 5> errors() const { return {e_tbar, e_l2proj, e_l2, e_press, e_weighted}; }
};

struct ErrorReport {
  std::vector<ErrorRow> rows;
};

/// Observed orders between consecutive rows: log(e_prev/e_cur)/log(h_prev/h_cur).
/// Row i of the result corresponds to report row i+1.
inline std::vector<std::array<double, 5>> error_rates(const ErrorReport& report) {
  std::vector<std::array<double, 5>> rates;
  for (size_t i = 1; i < report.rows.size(); ++i) {
    const auto prev = report.rows[i - 1].errors();
    const auto cur = report.rows[i].errors();
    const double hratio = std::log(report.rows[i - 1].h / report.rows[i].h);
    std::array<double, 5> row{};
    for (size_t c = 0; c < 5; ++c) row[c] = std::log(prev[c] / cur[c]) / hratio;
    rates.push_back(row);
  }
  return rates;
}

/// All error norms of a discrete solution against a smooth exact pair.
inline ErrorRow errors_vs_exact(const FeSpace& space, const BrinkmanProblem& problem,
                                const WgVelocity& u_h, const PressureField& p_h,
                                const VectorFun& exact_u, const ScalarFun& exact_p) {
  const Mesh& mesh = space.mesh();
  ErrorRow row;
  row.h = mesh.max_diameter();

  // Projection errors measure against {Q_0 u, Q_b u} and the pressure projection.
  WgVelocity proj_u = project_velocity(space, exact_u);
  WgVelocity diff = proj_u;
  diff.v0 -= u_h.v0;
  diff.vb -= u_h.vb;
  row.e_tbar = energy_error(space, problem, diff);

  PressureField proj_p = project_pressure(space, exact_p);

  double l2proj = 0.0, l2 = 0.0, press = 0.0, weighted = 0.0;
  std::vector<Vec2> points;
  std::vector<double> weights;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const Vec2 centroid = mesh.element_centroid[t];
    space.element_quadrature(t, space.triangle_rule_data(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const Vec2 uh_val = eval_interior(space, t, u_h, points[q]);
      const Vec2 proj_val = eval_interior(space, t, proj_u, points[q]);
      const Vec2 exact_val = exact_u(points[q]);
      const double ph_val = eval_pressure(space, t, p_h, points[q]);
      const double proj_p_val = eval_pressure(space, t, proj_p, points[q]);
      const double inv_kappa = problem.darcy_sample(points[q], centroid);
      l2proj += weights[q] * (proj_val - uh_val).squaredNorm();
      l2 += weights[q] * (exact_val - uh_val).squaredNorm();
      press += weights[q] * square(proj_p_val - ph_val);
      weighted += weights[q] * inv_kappa * (exact_val - uh_val).squaredNorm();
    }
  }
  row.e_l2proj = std::sqrt(l2proj);
  row.e_l2 = std::sqrt(l2);
  row.e_press = std::sqrt(press);
  row.e_weighted = std::sqrt(weighted);
  return row;
}

/// Uniformly random velocity field with coefficients in [-1, 1]; traces on
/// boundary edges are zeroed when homogeneous is set.
inline WgVelocity random_velocity(const FeSpace& space, std::mt19937_64& rng,
                                  bool homogeneous = true) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const DofMap& dofs = space.dofs();
  WgVelocity v = WgVelocity::zero(dofs);
  for (int i = 0; i < v.v0.size(); ++i) v.v0[i] = unit(rng);
  for (int i = 0; i < v.vb.size(); ++i) v.vb[i] = unit(rng);
  if (homogeneous) {
    for (int e = 0; e < space.mesh().n_edges(); ++e) {
      if (space.mesh().edge_on_boundary(e)) {
        v.vb.segment(dofs.vb_offset(e) - dofs.v0_total(), dofs.vb_per_edge).setZero();
      }
    }
  }
  return v;
}

/// Uniformly random pressure field with coefficients in [-1, 1].
inline PressureField random_pressure(const FeSpace& space, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  PressureField q = PressureField::zero(space.dofs());
  for (int i = 0; i < q.coeffs.size(); ++i) q.coeffs[i] = unit(rng);
  return q;
}

/// Worst-case discrepancy of the projection-commuting property of the weak
/// operators over random global polynomial velocity fields: grad_w of the
/// projected field must equal the tensor projection of the gradient, and
/// div_w must equal the scalar projection of the divergence.
struct CommutativityResult {
  double worst_gradient = 0.0;
  double worst_divergence = 0.0;
  bool pass(double tolerance = 1e-11) const {
    return worst_gradient <= tolerance && worst_divergence <= tolerance;
  }
};

inline CommutativityResult verify_commutativity(const FeSpace& space, int trials,
                                                unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const int k = space.order();
  const auto exps = monomial_exponents(k);
  const int np = static_cast<int>(exps.size());
  const int npm = poly_dim(k - 1);
  const Mesh& mesh = space.mesh();
  CommutativityResult result;

  for (int trial = 0; trial < trials; ++trial) {
    Eigen::MatrixXd coeffs(np, 2);
    for (int i = 0; i < np; ++i) {
      coeffs(i, 0) = unit(rng);
      coeffs(i, 1) = unit(rng);
    }
    const VectorFun v = [&](const Vec2& p) {
      Vec2 value(0.0, 0.0);
      for (int i = 0; i < np; ++i) {
        const double m = powi(p.x(), exps[i][0]) * powi(p.y(), exps[i][1]);
        value.x() += coeffs(i, 0) * m;
        value.y() += coeffs(i, 1) * m;
      }
      return value;
    };
    const auto dv = [&](const Vec2& p, int comp, int dir) {
      double value = 0.0;
      for (int i = 0; i < np; ++i) {
        const int a = exps[i][0];
        const int b = exps[i][1];
        const double m = dir == 0 ? (a == 0 ? 0.0 : a * powi(p.x(), a - 1) * powi(p.y(), b))
                                  : (b == 0 ? 0.0 : b * powi(p.x(), a) * powi(p.y(), b - 1));
        value += coeffs(i, comp) * m;
      }
      return value;
    };

    const WgVelocity projected = project_velocity(space, v);
    for (int t = 0; t < mesh.n_elements(); ++t) {
      const Eigen::MatrixXd grad_w = weak_gradient(space, t, projected);
      const Eigen::VectorXd div_w = weak_divergence(space, t, projected);
      const Eigen::MatrixXd mass = space.element_mass(t, k - 1);

      Eigen::VectorXd div_proj;
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          const Eigen::VectorXd entry_proj = project_pressure_element(
              space, t, [&](const Vec2& p) { return dv(p, i, j); });
          const Eigen::VectorXd d = grad_w.row(2 * i + j).transpose().head(npm) - entry_proj;
          result.worst_gradient =
              std::max(result.worst_gradient, std::sqrt(d.dot(mass * d)));
        }
      }
      div_proj = project_pressure_element(
          space, t, [&](const Vec2& p) { return dv(p, 0, 0) + dv(p, 1, 1); });
      const Eigen::VectorXd d = div_w - div_proj;
      result.worst_divergence =
          std::max(result.worst_divergence, std::sqrt(d.dot(mass * d)));
    }
  }
  return result;
}

}  // namespace wg

#endif
