#ifndef WG_SPACE_HPP
#define WG_SPACE_HPP

#include <vector>

#include "wg/basis.hpp"
#include "wg/mesh.hpp"
#include "wg/quadrature.hpp"

namespace wg {

/// Global numbering of the unknowns of order-k weak Galerkin spaces: interior
/// velocity components per element, trace velocity components per edge, and
/// pressure coefficients per element.  Velocity DOFs form one index space
/// (all interior blocks first, then all edge blocks); pressure is separate.
struct DofMap {
  int order = 1;
  int n_elements = 0;
  int n_edges = 0;
  int v0_per_element = 0;  // 2 dim P_k
  int vb_per_edge = 0;     // 2 (k+1)
  int p_per_element = 0;   // dim P_{k-1}

  DofMap() = default;
  DofMap(const Mesh& mesh, int k)
      : order(k),
        n_elements(mesh.n_elements()),
        n_edges(mesh.n_edges()),
        v0_per_element(2 * poly_dim(k)),
        vb_per_edge(2 * (k + 1)),
        p_per_element(poly_dim(k - 1)) {}

  int v0_total() const { return n_elements * v0_per_element; }
  int vb_total() const { return n_edges * vb_per_edge; }
  int velocity_total() const { return v0_total() + vb_total(); }
  int p_total() const { return n_elements * p_per_element; }

  int v0_offset(int element) const { return element * v0_per_element; }
  int vb_offset(int edge) const { return v0_total() + edge * vb_per_edge; }
  int p_offset(int element) const { return element * p_per_element; }
};

/// Weak Galerkin velocity: interior coefficients v0 (per element, component
/// blocks of scaled element monomials) and trace coefficients vb (per edge,
/// component blocks of arc-length monomials).  vb is stored once per edge and
/// is therefore single-valued by construction.
struct WgVelocity {
  int order = 1;
  Eigen::VectorXd v0;
  Eigen::VectorXd vb;

  static constexpr const char* basis_convention = "scaled-monomial";

  static WgVelocity zero(const DofMap& dofs) {
    WgVelocity v;
    v.order = dofs.order;
    v.v0 = Eigen::VectorXd::Zero(dofs.v0_total());
    v.vb = Eigen::VectorXd::Zero(dofs.vb_total());
    return v;
  }
};

/// Discontinuous piecewise P_{k-1} pressure in scaled element monomials.
struct PressureField {
  int order = 1;  // k of the paired velocity space; the field itself is P_{k-1}
  Eigen::VectorXd coeffs;

  static PressureField zero(const DofMap& dofs) {
    PressureField p;
    p.order = dofs.order;
    p.coeffs = Eigen::VectorXd::Zero(dofs.p_total());
    return p;
  }
};

/// Element-local matrices of the weak Galerkin machinery.  Local velocity
/// DOFs are ordered [interior comp x (dim P_k), interior comp y, then per
/// local edge: comp x (k+1), comp y (k+1)].
struct LocalOperators {
  int element = -1;
  int n_loc = 0;
  Eigen::MatrixXd mass_k;       // scalar P_k mass matrix on T
  Eigen::MatrixXd mass_km1;     // scalar P_{k-1} mass matrix on T
  Eigen::MatrixXd weak_grad;    // (4 dim P_{k-1}) x n_loc; row block 2i+j holds
                                // the P_{k-1} coefficients of tensor entry (i,j)
  Eigen::MatrixXd div_moments;  // dim P_{k-1} x n_loc; entry (m, L) = (div_w phi_L, m_m)_T
  Eigen::MatrixXd weak_div;     // dim P_{k-1} x n_loc; P_{k-1} coefficients of div_w
  Eigen::MatrixXd stab;         // n_loc x n_loc; h_T^{-1} sum_e (v0-vb, w0-wb)_e
};

/// Weak Galerkin space of order k >= 1 on a triangular mesh.  Owns the DOF
/// numbering and the quadrature rules; validates the rules on construction.
class FeSpace {
 public:
  FeSpace(const Mesh& mesh, int k)
      : mesh_(&mesh),
        order_(k),
        dofs_(mesh, k),
        tri_rule_(triangle_rule(2 * k + 2)),
        seg_rule_(segment_rule(2 * k + 2)),
        tri_data_rule_(triangle_rule(std::max(2 * k + 2, 10))),
        seg_data_rule_(segment_rule(std::max(2 * k + 2, 10))) {
    if (k < 1) throw std::invalid_argument("FeSpace: order must be at least 1");
    verify_rules(tri_rule_, seg_rule_);
    verify_rules(tri_data_rule_, seg_data_rule_);
  }

  const Mesh& mesh() const { return *mesh_; }
  int order() const { return order_; }
  const DofMap& dofs() const { return dofs_; }

  /// Exact rules for polynomial integrands of the bilinear forms.
  const TriangleQuadrature& triangle_rule_assembly() const { return tri_rule_; }
  const SegmentQuadrature& segment_rule_assembly() const { return seg_rule_; }
  /// Higher-order rules for non-polynomial data (sources, exact solutions).
  const TriangleQuadrature& triangle_rule_data() const { return tri_data_rule_; }
  const SegmentQuadrature& segment_rule_data() const { return seg_data_rule_; }

  ElementBasis element_basis(int t, int m) const {
    return ElementBasis(m, mesh_->element_centroid[t], mesh_->element_diameter[t]);
  }
  EdgeBasis edge_basis() const { return EdgeBasis(order_); }

  int n_local_velocity(int t) const {
    return dofs_.v0_per_element +
           static_cast<int>(mesh_->element_edges[t].size()) * dofs_.vb_per_edge;
  }

  /// Global velocity indices of an element's local DOFs, in local order.
  std::vector<int> local_velocity_dofs(int t) const {
    std::vector<int> global;
    global.reserve(n_local_velocity(t));
    for (int i = 0; i < dofs_.v0_per_element; ++i) global.push_back(dofs_.v0_offset(t) + i);
    for (int edge : mesh_->element_edges[t]) {
      for (int i = 0; i < dofs_.vb_per_edge; ++i) global.push_back(dofs_.vb_offset(edge) + i);
    }
    return global;
  }

  /// Element-local slice of a velocity field, in local DOF order.
  Eigen::VectorXd local_velocity_coeffs(int t, const WgVelocity& v) const {
    const auto idx = local_velocity_dofs(t);
    Eigen::VectorXd local(idx.size());
    const int nv0 = dofs_.v0_total();
    for (size_t i = 0; i < idx.size(); ++i) {
      local[i] = idx[i] < nv0 ? v.v0[idx[i]] : v.vb[idx[i] - nv0];
    }
    return local;
  }

  /// Quadrature points of the assembly rule mapped to element t, with weights
  /// scaled so they sum to |T|.
  void element_quadrature(int t, const TriangleQuadrature& rule, std::vector<Vec2>& points,
                          std::vector<double>& weights) const {
    const auto& tri = mesh_->elements[t];
    const Vec2& p0 = mesh_->vertices[tri[0]];
    const Vec2& p1 = mesh_->vertices[tri[1]];
    const Vec2& p2 = mesh_->vertices[tri[2]];
    const double jac = 2.0 * mesh_->element_area[t];
    points.resize(rule.points.size());
    weights.resize(rule.points.size());
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const double xi = rule.points[q].x();
      const double eta = rule.points[q].y();
      points[q] = p0 + xi * (p1 - p0) + eta * (p2 - p0);
      weights[q] = jac * rule.weights[q];
    }
  }

  /// Scalar mass matrix of the scaled P_m monomials on element t.
  Eigen::MatrixXd element_mass(int t, int m) const {
    const ElementBasis basis = element_basis(t, m);
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    std::vector<Vec2> points;
    std::vector<double> weights;
    element_quadrature(t, tri_rule_, points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const Eigen::VectorXd phi = basis.eval(points[q]);
      mass.noalias() += weights[q] * phi * phi.transpose();
    }
    return mass;
  }

  /// All element-local operator matrices for element t.
  LocalOperators local_operators(int t) const {
    LocalOperators ops;
    ops.element = t;
    const int k = order_;
    const int npk = poly_dim(k);
    const int npm = poly_dim(k - 1);
    const int nek = k + 1;
    const auto& edges = mesh_->element_edges[t];
    const auto& signs = mesh_->element_edge_signs[t];
    const int n_edges_loc = static_cast<int>(edges.size());
    ops.n_loc = 2 * npk + n_edges_loc * 2 * nek;

    const ElementBasis bk = element_basis(t, k);
    const ElementBasis bm = element_basis(t, k - 1);
    const EdgeBasis be = edge_basis();

    ops.mass_k = Eigen::MatrixXd::Zero(npk, npk);
    ops.mass_km1 = Eigen::MatrixXd::Zero(npm, npm);
    Eigen::MatrixXd grad_rhs = Eigen::MatrixXd::Zero(4 * npm, ops.n_loc);
    ops.div_moments = Eigen::MatrixXd::Zero(npm, ops.n_loc);
    ops.stab = Eigen::MatrixXd::Zero(ops.n_loc, ops.n_loc);

    // Volume contributions: mass matrices and -(v0, grad m)_T moments.
    std::vector<Vec2> points;
    std::vector<double> weights;
    element_quadrature(t, tri_rule_, points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      const double w = weights[q];
      const Eigen::VectorXd phi_k = bk.eval(points[q]);
      const Eigen::VectorXd phi_m = bm.eval(points[q]);
      const Eigen::MatrixXd grad_m = bm.eval_grad(points[q]);
      ops.mass_k.noalias() += w * phi_k * phi_k.transpose();
      ops.mass_km1.noalias() += w * phi_m * phi_m.transpose();
      for (int c = 0; c < 2; ++c) {
        for (int m = 0; m < npm; ++m) {
          for (int a = 0; a < npk; ++a) {
            const double vol = w * phi_k[a];
            const int col = c * npk + a;
            grad_rhs((2 * c + 0) * npm + m, col) -= vol * grad_m(m, 0);
            grad_rhs((2 * c + 1) * npm + m, col) -= vol * grad_m(m, 1);
            // Only the diagonal tensor entries feed the divergence moments.
            ops.div_moments(m, col) -= vol * grad_m(m, c);
          }
        }
      }
    }

    // Edge contributions: <vb, tau n>, <vb n, m>, and the stabilizer.
    const double inv_h = 1.0 / mesh_->element_diameter[t];
    for (int le = 0; le < n_edges_loc; ++le) {
      const int e = edges[le];
      const Vec2 n_out = signs[le] * mesh_->edge_normal[e];
      const double len = mesh_->edge_length[e];
      const int edge_off = 2 * npk + le * 2 * nek;
      for (size_t q = 0; q < seg_rule_.points.size(); ++q) {
        const double s = seg_rule_.points[q];
        const double w = seg_rule_.weights[q] * len;
        const Vec2 x = mesh_->edge_point(e, s);
        const Eigen::VectorXd pe = be.eval(s);
        const Eigen::VectorXd pm = bm.eval(x);
        const Eigen::VectorXd pk = bk.eval(x);
        for (int c = 0; c < 2; ++c) {
          for (int m = 0; m < npm; ++m) {
            for (int b = 0; b < nek; ++b) {
              const double tr = w * pe[b] * pm[m];
              const int col = edge_off + c * nek + b;
              grad_rhs((2 * c + 0) * npm + m, col) += tr * n_out.x();
              grad_rhs((2 * c + 1) * npm + m, col) += tr * n_out.y();
              ops.div_moments(m, col) += tr * n_out[c];
            }
          }
          // Stabilizer row: trace of v0 minus vb, one component at a time.
          Eigen::VectorXd diff = Eigen::VectorXd::Zero(ops.n_loc);
          diff.segment(c * npk, npk) = pk;
          diff.segment(edge_off + c * nek, nek) = -pe;
          ops.stab.noalias() += (w * inv_h) * diff * diff.transpose();
        }
      }
    }

    const Eigen::LLT<Eigen::MatrixXd> llt_m = ops.mass_km1.llt();
    if (llt_m.info() != Eigen::Success)
      throw InternalError("singular P_{k-1} mass matrix on an element");
    ops.weak_div = llt_m.solve(ops.div_moments);
    ops.weak_grad.resize(4 * npm, ops.n_loc);
    for (int block = 0; block < 4; ++block) {
      ops.weak_grad.middleRows(block * npm, npm) =
          llt_m.solve(grad_rhs.middleRows(block * npm, npm));
    }
    return ops;
  }

 private:
  const Mesh* mesh_;
  int order_;
  DofMap dofs_;
  TriangleQuadrature tri_rule_;
  SegmentQuadrature seg_rule_;
  TriangleQuadrature tri_data_rule_;
  SegmentQuadrature seg_data_rule_;
};

/// Discrete weak gradient of v on element t: a (4 x dim P_{k-1}) matrix whose
/// row 2i+j holds the coefficients of tensor entry (i,j) in the element's
/// scaled P_{k-1} monomials.
inline Eigen::MatrixXd weak_gradient(const FeSpace& space, int t, const WgVelocity& v) {
  const LocalOperators ops = space.local_operators(t);
  const Eigen::VectorXd local = space.local_velocity_coeffs(t, v);
  const Eigen::VectorXd flat = ops.weak_grad * local;
  const int npm = poly_dim(space.order() - 1);
  Eigen::MatrixXd result(4, npm);
  for (int block = 0; block < 4; ++block) result.row(block) = flat.segment(block * npm, npm);
  return result;
}

/// Discrete weak divergence of v on element t in scaled P_{k-1} monomials.
inline Eigen::VectorXd weak_divergence(const FeSpace& space, int t, const WgVelocity& v) {
  const LocalOperators ops = space.local_operators(t);
  return ops.weak_div * space.local_velocity_coeffs(t, v);
}

}  // namespace wg

#endif
