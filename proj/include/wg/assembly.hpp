#ifndef WG_ASSEMBLY_HPP
#define WG_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <vector>

#include "wg/problem.hpp"
#include "wg/projection.hpp"
#include "wg/space.hpp"

namespace wg {

/// Symmetric indefinite system of the discrete Brinkman problem,
///
///   [ A  -B^T  0 ] [u]   [rhs_velocity]
///   [-B   0    c ] [p] = [rhs_pressure]
///   [ 0  c^T   0 ] [l]   [0]
///
/// where A carries the viscous, Darcy and stabilizer terms, B the weak
/// divergence coupling, and c the pressure-mean constraint enforced through
/// the multiplier l.  Boundary trace DOFs are eliminated: A and B act on the
/// reduced velocity index set, and the lifted Dirichlet data sits in the
/// right-hand sides and in boundary_values.
struct SaddleSystem {
  DofMap dofs;
  Eigen::SparseMatrix<double> A;
  Eigen::SparseMatrix<double> B;
  Eigen::VectorXd c;
  Eigen::VectorXd rhs_velocity;
  Eigen::VectorXd rhs_pressure;
  std::vector<int> reduced_to_full;
  std::vector<int> full_to_reduced;   // -1 marks an eliminated DOF
  std::vector<int> eliminated;        // eliminated velocity DOFs (boundary traces)
  Eigen::VectorXd boundary_values;    // full velocity indexing, zero off the boundary
  Eigen::VectorXd pressure_mass_diag; // diagonal of the pressure mass matrix
  double domain_area = 0.0;
  double mu = 1.0;

  int n_velocity_reduced() const { return static_cast<int>(reduced_to_full.size()); }
  int total_dim() const { return n_velocity_reduced() + dofs.p_total() + 1; }

  Eigen::VectorXd full_rhs() const {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(total_dim());
    rhs.segment(0, n_velocity_reduced()) = rhs_velocity;
    rhs.segment(n_velocity_reduced(), dofs.p_total()) = rhs_pressure;
    return rhs;
  }

  /// Matrix-vector product with the full saddle operator.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    const int nv = n_velocity_reduced();
    const int np = dofs.p_total();
    const auto u = x.segment(0, nv);
    const auto p = x.segment(nv, np);
    const double lambda = x[nv + np];
    Eigen::VectorXd y(total_dim());
    y.segment(0, nv) = A * u - B.transpose() * p;
    y.segment(nv, np) = -(B * u) + lambda * c;
    y[nv + np] = c.dot(p);
    return y;
  }

  /// Explicit sparse form of the full operator, for direct factorization.
  Eigen::SparseMatrix<double> assemble_full() const {
    const int nv = n_velocity_reduced();
    const int np = dofs.p_total();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(A.nonZeros() + 2 * B.nonZeros() + 2 * np);
    for (int col = 0; col < A.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
        triplets.emplace_back(it.row(), it.col(), it.value());
      }
    }
    for (int col = 0; col < B.outerSize(); ++col) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(B, col); it; ++it) {
        triplets.emplace_back(nv + it.row(), it.col(), -it.value());
        triplets.emplace_back(it.col(), nv + it.row(), -it.value());
      }
    }
    for (int m = 0; m < np; ++m) {
      triplets.emplace_back(nv + m, nv + np, c[m]);
      triplets.emplace_back(nv + np, nv + m, c[m]);
    }
    Eigen::SparseMatrix<double> K(total_dim(), total_dim());
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
  }

  /// Expands a reduced velocity solution with the prescribed boundary traces.
  WgVelocity expand_velocity(const Eigen::VectorXd& u_reduced) const {
    WgVelocity v = WgVelocity::zero(dofs);
    Eigen::VectorXd full = boundary_values;
    for (int r = 0; r < n_velocity_reduced(); ++r) full[reduced_to_full[r]] = u_reduced[r];
    v.v0 = full.segment(0, dofs.v0_total());
    v.vb = full.segment(dofs.v0_total(), dofs.vb_total());
    return v;
  }

  /// max over pressure basis functions q of |b(v, q)|: the discrete
  /// divergence-free residual.  Assumes v carries this system's boundary
  /// traces (true for velocities produced by solving the system).
  double divergence_residual(const WgVelocity& v) const {
    Eigen::VectorXd reduced(n_velocity_reduced());
    const int nv0 = dofs.v0_total();
    for (int r = 0; r < n_velocity_reduced(); ++r) {
      const int full = reduced_to_full[r];
      reduced[r] = full < nv0 ? v.v0[full] : v.vb[full - nv0];
    }
    // rhs_pressure carries the boundary part of B v, so the sum is b(v, .).
    return (B * reduced + rhs_pressure).cwiseAbs().maxCoeff();
  }
};

/// Scalar mass matrix of the element's P_k basis weighted by the Darcy
/// coefficient sample at each quadrature point.  In centroid mode this equals
/// inv_kappa(centroid) times the plain mass matrix.
inline Eigen::MatrixXd darcy_mass(const FeSpace& space, const BrinkmanProblem& problem, int t,
                                  const LocalOperators& ops) {
  const Vec2 centroid = space.mesh().element_centroid[t];
  if (problem.kappa_sampling == KappaSampling::centroid)
    return problem.sample_inv_kappa(centroid) * ops.mass_k;
  const ElementBasis basis = space.element_basis(t, space.order());
  std::vector<Vec2> points;
  std::vector<double> weights;
  // The integrand is non-polynomial in this mode; use the data-quality rule.
  space.element_quadrature(t, space.triangle_rule_data(), points, weights);
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (size_t q = 0; q < points.size(); ++q) {
    const Eigen::VectorXd phi = basis.eval(points[q]);
    mass.noalias() += weights[q] * problem.darcy_sample(points[q], centroid) * phi * phi.transpose();
  }
  return mass;
}

/// Element matrix of a(.,.): viscous weak-gradient term, Darcy mass term, and
/// the h^{-1}-weighted stabilizer (optionally scaled by mu).
inline Eigen::MatrixXd local_a(const FeSpace& space, const BrinkmanProblem& problem, int t,
                               const LocalOperators& ops) {
  const int npk = poly_dim(space.order());
  const int npm = poly_dim(space.order() - 1);
  const double stab_weight = problem.stab_visc_scaling ? problem.mu : 1.0;

  Eigen::MatrixXd result = stab_weight * ops.stab;
  for (int block = 0; block < 4; ++block) {
    const auto rows = ops.weak_grad.middleRows(block * npm, npm);
    result.noalias() += problem.mu * rows.transpose() * ops.mass_km1 * rows;
  }
  const Eigen::MatrixXd mass = darcy_mass(space, problem, t, ops);
  for (int c = 0; c < 2; ++c) {
    result.block(c * npk, c * npk, npk, npk) += problem.mu * mass;
  }
  return 0.5 * (result + result.transpose());
}

/// Element matrix of b(.,.): rows are the element's pressure basis moments of
/// the weak divergence of each local velocity DOF.
inline Eigen::MatrixXd local_b(const FeSpace& space, int t, const LocalOperators& ops) {
  (void)space;
  (void)t;
  return ops.div_moments;
}

/// Element load vector (f, v0)_T against the interior basis.
inline Eigen::VectorXd local_load(const FeSpace& space, const BrinkmanProblem& problem,
                                  int t) {
  const int npk = poly_dim(space.order());
  const ElementBasis basis = space.element_basis(t, space.order());
  const Vec2 centroid = space.mesh().element_centroid[t];
  Eigen::VectorXd load = Eigen::VectorXd::Zero(2 * npk);
  if (!problem.f) return load;
  std::vector<Vec2> points;
  std::vector<double> weights;
  space.element_quadrature(t, space.triangle_rule_data(), points, weights);
  for (size_t q = 0; q < points.size(); ++q) {
    const Eigen::VectorXd phi = basis.eval(points[q]);
    const Vec2 value = problem.f(points[q], problem.darcy_sample(points[q], centroid));
    load.segment(0, npk).noalias() += weights[q] * value.x() * phi;
    load.segment(npk, npk).noalias() += weights[q] * value.y() * phi;
  }
  return load;
}

/// Assembles the reduced saddle system: element loop in index order, boundary
/// trace DOFs eliminated against the projected Dirichlet data.
inline SaddleSystem assemble(const FeSpace& space, const BrinkmanProblem& problem) {
  problem.validate();
  const Mesh& mesh = space.mesh();
  const DofMap& dofs = space.dofs();

  SaddleSystem system;
  system.dofs = dofs;
  system.mu = problem.mu;

  // Prescribe boundary traces from the edge projection of g.
  const int n_velocity = dofs.velocity_total();
  std::vector<bool> constrained(n_velocity, false);
  system.boundary_values = Eigen::VectorXd::Zero(n_velocity);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (!mesh.edge_on_boundary(e)) continue;
    if (!problem.g)
      throw InternalError("boundary edge without Dirichlet trace data");
    const Eigen::VectorXd traces =
        project_trace_edge(space, e, [&problem](const Vec2& p) { return problem.g(p); });
    for (int i = 0; i < dofs.vb_per_edge; ++i) {
      const int dof = dofs.vb_offset(e) + i;
      constrained[dof] = true;
      system.boundary_values[dof] = traces[i];
      system.eliminated.push_back(dof);
    }
  }

  system.full_to_reduced.assign(n_velocity, -1);
  for (int dof = 0; dof < n_velocity; ++dof) {
    if (!constrained[dof]) {
      system.full_to_reduced[dof] = static_cast<int>(system.reduced_to_full.size());
      system.reduced_to_full.push_back(dof);
    }
  }
  const int nv = system.n_velocity_reduced();
  const int np = dofs.p_total();

  std::vector<Eigen::Triplet<double>> a_triplets;
  std::vector<Eigen::Triplet<double>> b_triplets;
  system.rhs_velocity = Eigen::VectorXd::Zero(nv);
  system.rhs_pressure = Eigen::VectorXd::Zero(np);
  system.c = Eigen::VectorXd::Zero(np);
  system.pressure_mass_diag = Eigen::VectorXd::Zero(np);

  for (int t = 0; t < mesh.n_elements(); ++t) {
    const LocalOperators ops = space.local_operators(t);
    const Eigen::MatrixXd a_loc = local_a(space, problem, t, ops);
    const Eigen::MatrixXd b_loc = local_b(space, t, ops);
    const Eigen::VectorXd load = local_load(space, problem, t);
    const std::vector<int> global = space.local_velocity_dofs(t);

    for (int i = 0; i < ops.n_loc; ++i) {
      const int gi = global[i];
      if (constrained[gi]) continue;
      const int ri = system.full_to_reduced[gi];
      for (int j = 0; j < ops.n_loc; ++j) {
        const int gj = global[j];
        if (constrained[gj]) {
          system.rhs_velocity[ri] -= a_loc(i, j) * system.boundary_values[gj];
        } else {
          a_triplets.emplace_back(ri, system.full_to_reduced[gj], a_loc(i, j));
        }
      }
      if (i < dofs.v0_per_element) system.rhs_velocity[ri] += load[i];
    }

    for (int m = 0; m < dofs.p_per_element; ++m) {
      const int row = dofs.p_offset(t) + m;
      for (int j = 0; j < ops.n_loc; ++j) {
        const int gj = global[j];
        if (constrained[gj]) {
          // -B u + c l = 0 moves the boundary part of B u to the right.
          system.rhs_pressure[row] += b_loc(m, j) * system.boundary_values[gj];
        } else {
          b_triplets.emplace_back(row, system.full_to_reduced[gj], b_loc(m, j));
        }
      }
    }

    // Pressure-mean constraint row: integrals of the pressure basis.
    const ElementBasis pressure_basis = space.element_basis(t, space.order() - 1);
    std::vector<Vec2> points;
    std::vector<double> weights;
    space.element_quadrature(t, space.triangle_rule_assembly(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const Eigen::VectorXd psi = pressure_basis.eval(points[q]);
      system.c.segment(dofs.p_offset(t), dofs.p_per_element).noalias() += weights[q] * psi;
      system.pressure_mass_diag.segment(dofs.p_offset(t), dofs.p_per_element).noalias() +=
          weights[q] * psi.cwiseProduct(psi);
    }
    system.domain_area += mesh.element_area[t];
  }

  system.A.resize(nv, nv);
  system.A.setFromTriplets(a_triplets.begin(), a_triplets.end());
  system.B.resize(np, nv);
  system.B.setFromTriplets(b_triplets.begin(), b_triplets.end());
  return system;
}

}  // namespace wg

#endif
