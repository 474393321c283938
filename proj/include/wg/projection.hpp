#ifndef WG_PROJECTION_HPP
#define WG_PROJECTION_HPP

#include <functional>

#include "wg/space.hpp"

namespace wg {

using VectorFun = std::function<Vec2(const Vec2&)>;
using ScalarFun = std::function<double(const Vec2&)>;

/// L2 projection of a vector field onto [P_k(T)]^2 on element t; returns the
/// interior coefficient block (component x monomials, then component y).
inline Eigen::VectorXd project_interior_element(const FeSpace& space, int t,
                                                const VectorFun& f) {
  const ElementBasis basis = space.element_basis(t, space.order());
  const int np = basis.size();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(np, 2);
  std::vector<Vec2> points;
  std::vector<double> weights;
  space.element_quadrature(t, space.triangle_rule_data(), points, weights);
  for (size_t q = 0; q < points.size(); ++q) {
    const Eigen::VectorXd phi = basis.eval(points[q]);
    const Vec2 value = f(points[q]);
    rhs.col(0).noalias() += weights[q] * value.x() * phi;
    rhs.col(1).noalias() += weights[q] * value.y() * phi;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt = space.element_mass(t, space.order()).llt();
  if (llt.info() != Eigen::Success)
    throw InternalError("singular element mass matrix in interior projection");
  Eigen::VectorXd coeffs(2 * np);
  coeffs.segment(0, np) = llt.solve(rhs.col(0));
  coeffs.segment(np, np) = llt.solve(rhs.col(1));
  return coeffs;
}

/// L2 projection of a vector field onto [P_k(e)]^2 on edge e; returns the
/// trace coefficient block of that edge.
inline Eigen::VectorXd project_trace_edge(const FeSpace& space, int e, const VectorFun& f) {
  const EdgeBasis basis = space.edge_basis();
  const int ne = basis.size();
  const double len = space.mesh().edge_length[e];
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ne, ne);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ne, 2);
  const SegmentQuadrature& rule = space.segment_rule_data();
  for (size_t q = 0; q < rule.points.size(); ++q) {
    const double w = rule.weights[q] * len;
    const Eigen::VectorXd phi = basis.eval(rule.points[q]);
    const Vec2 value = f(space.mesh().edge_point(e, rule.points[q]));
    mass.noalias() += w * phi * phi.transpose();
    rhs.col(0).noalias() += w * value.x() * phi;
    rhs.col(1).noalias() += w * value.y() * phi;
  }
  const Eigen::LLT<Eigen::MatrixXd> llt = mass.llt();
  if (llt.info() != Eigen::Success)
    throw InternalError("singular edge mass matrix in trace projection");
  Eigen::VectorXd coeffs(2 * ne);
  coeffs.segment(0, ne) = llt.solve(rhs.col(0));
  coeffs.segment(ne, ne) = llt.solve(rhs.col(1));
  return coeffs;
}

/// Interior projection on every element.
inline Eigen::VectorXd project_interior(const FeSpace& space, const VectorFun& f) {
  const DofMap& dofs = space.dofs();
  Eigen::VectorXd v0(dofs.v0_total());
  for (int t = 0; t < dofs.n_elements; ++t) {
    v0.segment(dofs.v0_offset(t), dofs.v0_per_element) = project_interior_element(space, t, f);
  }
  return v0;
}

/// Trace projection on every edge.
inline Eigen::VectorXd project_trace(const FeSpace& space, const VectorFun& f) {
  const DofMap& dofs = space.dofs();
  Eigen::VectorXd vb(dofs.vb_total());
  for (int e = 0; e < dofs.n_edges; ++e) {
    vb.segment(e * dofs.vb_per_edge, dofs.vb_per_edge) = project_trace_edge(space, e, f);
  }
  return vb;
}

/// Combined projection {Q_0 f, Q_b f} into the weak Galerkin velocity space.
inline WgVelocity project_velocity(const FeSpace& space, const VectorFun& f) {
  WgVelocity v;
  v.order = space.order();
  v.v0 = project_interior(space, f);
  v.vb = project_trace(space, f);
  return v;
}

/// L2 projection of a scalar field onto P_{k-1}(T) on element t.
inline Eigen::VectorXd project_pressure_element(const FeSpace& space, int t,
                                                const ScalarFun& f) {
  const ElementBasis basis = space.element_basis(t, space.order() - 1);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
  std::vector<Vec2> points;
  std::vector<double> weights;
  space.element_quadrature(t, space.triangle_rule_data(), points, weights);
  for (size_t q = 0; q < points.size(); ++q) {
    rhs.noalias() += weights[q] * f(points[q]) * basis.eval(points[q]);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt = space.element_mass(t, space.order() - 1).llt();
  if (llt.info() != Eigen::Success)
    throw InternalError("singular element mass matrix in pressure projection");
  return llt.solve(rhs);
}

/// Element-wise L2 projection of a scalar field onto the pressure space.
inline PressureField project_pressure(const FeSpace& space, const ScalarFun& f) {
  const DofMap& dofs = space.dofs();
  PressureField p;
  p.order = space.order();
  p.coeffs.resize(dofs.p_total());
  for (int t = 0; t < dofs.n_elements; ++t) {
    p.coeffs.segment(dofs.p_offset(t), dofs.p_per_element) =
        project_pressure_element(space, t, f);
  }
  return p;
}

}  // namespace wg

#endif
