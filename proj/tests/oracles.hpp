// Independent numerical oracles for the test suite.
//
// Everything here deliberately avoids the library's own quadrature,
// projection, assembly and mesh code paths: integrals come from Romberg
// extrapolation of trapezoid sums, projections from dense Gram systems built
// on those integrals, mesh audits from a from-scratch edge walker, and linear
// solves from dense full-pivot factorizations.  Tests compare library output
// against these oracles (and against values frozen from oracle runs).
#ifndef WG_TEST_ORACLES_HPP
#define WG_TEST_ORACLES_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "wg/mesh.hpp"

namespace oracle {

/// Romberg integration of f over [a, b]: trapezoid sums with Richardson
/// extrapolation, run until successive diagonal entries agree to `tol`.
template <typename F>
double romberg(F&& f, double a, double b, double tol = 1e-14, int max_level = 18) {
  std::vector<std::vector<double>> table(1);
  double h = b - a;
  table[0].push_back(0.5 * h * (f(a) + f(b)));
  for (int level = 1; level < max_level; ++level) {
    h *= 0.5;
    double midpoints = 0.0;
    const long count = 1L << (level - 1);
    for (long i = 0; i < count; ++i) midpoints += f(a + (2 * i + 1) * h);
    table.emplace_back();
    table[level].push_back(0.5 * table[level - 1][0] + h * midpoints);
    double factor = 1.0;
    for (int m = 1; m <= level; ++m) {
      factor *= 4.0;
      table[level].push_back(
          (factor * table[level][m - 1] - table[level - 1][m - 1]) / (factor - 1.0));
    }
    const double current = table[level][level];
    const double previous = table[level - 1][level - 1];
    if (level >= 5 && std::abs(current - previous) <= tol * (1.0 + std::abs(current)))
      return current;
  }
  return table.back().back();
}

/// Integral of f over the triangle (p0, p1, p2) by iterated Romberg in the
/// reference coordinates: the inner integral runs over the collapsing
/// direction, the outer one over [0, 1].
template <typename F>
double triangle_integral(const wg::Vec2& p0, const wg::Vec2& p1, const wg::Vec2& p2, F&& f,
                         double tol = 5e-13) {
  const double jacobian = std::abs((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                                   (p2.x() - p0.x()) * (p1.y() - p0.y()));
  const auto outer = [&](double xi) {
    if (xi >= 1.0) return 0.0;
    const auto inner = [&](double eta) {
      const wg::Vec2 p = p0 + xi * (p1 - p0) + eta * (p2 - p0);
      return f(p);
    };
    return romberg(inner, 0.0, 1.0 - xi, tol * 0.1);
  };
  return jacobian * romberg(outer, 0.0, 1.0, tol);
}

/// Integral of f over triangle t of a mesh.
template <typename F>
double element_integral(const wg::Mesh& mesh, int t, F&& f, double tol = 5e-13) {
  const auto& tri = mesh.elements[t];
  return triangle_integral(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                           mesh.vertices[tri[2]], f, tol);
}

/// Integral of f(s) over edge e in the arc-length parameter s of [-1/2, 1/2],
/// including the length factor of the parametrization.
template <typename F>
double edge_integral(const wg::Mesh& mesh, int e, F&& f, double tol = 1e-14) {
  const double length = mesh.edge_length[e];
  return length * romberg([&](double s) { return f(s); }, -0.5, 0.5, tol);
}

/// Dense L2 projection of `target` onto the span of `basis` over a triangle:
/// Gram matrix and moments by Romberg integration, solved by full-pivot LU.
inline Eigen::VectorXd dense_triangle_projection(
    const wg::Vec2& p0, const wg::Vec2& p1, const wg::Vec2& p2,
    const std::vector<std::function<double(const wg::Vec2&)>>& basis,
    const std::function<double(const wg::Vec2&)>& target) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      gram(i, j) = gram(j, i) = triangle_integral(
          p0, p1, p2, [&](const wg::Vec2& p) { return basis[i](p) * basis[j](p); });
    }
    rhs[i] =
        triangle_integral(p0, p1, p2, [&](const wg::Vec2& p) { return basis[i](p) * target(p); });
  }
  return Eigen::FullPivLU<Eigen::MatrixXd>(gram).solve(rhs);
}

/// Dense L2 projection on an edge, in the arc-length parameter.
inline Eigen::VectorXd dense_edge_projection(
    const wg::Mesh& mesh, int e, const std::vector<std::function<double(double)>>& basis,
    const std::function<double(double)>& target) {
  const int n = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      gram(i, j) = gram(j, i) =
          edge_integral(mesh, e, [&](double s) { return basis[i](s) * basis[j](s); });
    }
    rhs[i] = edge_integral(mesh, e, [&](double s) { return basis[i](s) * target(s); });
  }
  return Eigen::FullPivLU<Eigen::MatrixXd>(gram).solve(rhs);
}

/// From-scratch audit of a mesh: rebuilds the edge set from the element list,
/// recomputes geometry by elementary formulas, and reports the worst
/// discrepancy against the mesh's stored connectivity and geometry.
struct MeshAudit {
  int n_vertices = 0;
  int n_elements = 0;
  int n_edges = 0;
  int n_boundary_edges = 0;
  double total_area = 0.0;
  double worst_defect = 0.0;  // 0 when the stored mesh matches the rebuild
};

inline MeshAudit audit_mesh(const wg::Mesh& mesh) {
  MeshAudit audit;
  audit.n_vertices = mesh.n_vertices();
  audit.n_elements = mesh.n_elements();
  auto note = [&audit](double defect) { audit.worst_defect = std::max(audit.worst_defect, defect); };

  // Rebuild the edge multiset from scratch.
  std::map<std::array<int, 2>, std::vector<int>> incident;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const auto& tri = mesh.elements[t];
    // Shoelace area; positive means counterclockwise as required.
    const wg::Vec2& a = mesh.vertices[tri[0]];
    const wg::Vec2& b = mesh.vertices[tri[1]];
    const wg::Vec2& c = mesh.vertices[tri[2]];
    const double area =
        0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
    if (area <= 0.0) note(1.0);
    audit.total_area += area;
    note(std::abs(area - mesh.element_area[t]));
    note(std::abs(std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()}) -
                  mesh.element_diameter[t]));
    note(((a + b + c) / 3.0 - mesh.element_centroid[t]).norm());
    for (int i = 0; i < 3; ++i) {
      const int lo = std::min(tri[i], tri[(i + 1) % 3]);
      const int hi = std::max(tri[i], tri[(i + 1) % 3]);
      incident[{lo, hi}].push_back(t);
    }
  }

  audit.n_edges = static_cast<int>(incident.size());
  note(std::abs(audit.n_edges - mesh.n_edges()));

  // Check each stored edge against the rebuilt map.
  std::set<std::array<int, 2>> stored;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const auto key = mesh.edge_vertices[e];
    if (key[0] >= key[1]) note(1.0);
    if (!stored.insert(key).second) note(1.0);  // duplicate edge record
    const auto it = incident.find(key);
    if (it == incident.end()) {
      note(1.0);
      continue;
    }
    const auto& owners = it->second;
    if (owners.size() > 2) note(static_cast<double>(owners.size() - 2));
    const bool boundary = owners.size() == 1;
    if (boundary != mesh.edge_on_boundary(e)) note(1.0);
    if (boundary) ++audit.n_boundary_edges;

    // Stored incident elements must be exactly the rebuilt owners.
    std::vector<int> recorded;
    for (int slot : mesh.edge_elements[e])
      if (slot >= 0) recorded.push_back(slot);
    std::vector<int> expected = owners;
    std::sort(recorded.begin(), recorded.end());
    std::sort(expected.begin(), expected.end());
    if (recorded != expected) note(1.0);

    const wg::Vec2& lo = mesh.vertices[key[0]];
    const wg::Vec2& hi = mesh.vertices[key[1]];
    note(std::abs((hi - lo).norm() - mesh.edge_length[e]));
    const wg::Vec2 normal = mesh.edge_normal[e];
    note(std::abs(normal.norm() - 1.0));
    note(std::abs(normal.dot(hi - lo)));  // normal orthogonal to the edge

    // Incidence signs: +1 exactly when the global normal points away from the
    // element's centroid.
    for (int t : owners) {
      const double side = (mesh.edge_midpoint(e) - mesh.element_centroid[t]).dot(normal);
      const int expected_sign = side > 0.0 ? 1 : -1;
      if (mesh.edge_sign_in(t, e) != expected_sign) note(1.0);
    }
    if (owners.size() == 2) {
      if (mesh.edge_sign_in(owners[0], e) + mesh.edge_sign_in(owners[1], e) != 0) note(1.0);
    }
  }

  // Edge endpoints of every element incidence must be element vertices.
  for (int t = 0; t < mesh.n_elements(); ++t) {
    const auto& tri = mesh.elements[t];
    for (int e : mesh.element_edges[t]) {
      for (int v : mesh.edge_vertices[e]) {
        if (v != tri[0] && v != tri[1] && v != tri[2]) note(1.0);
      }
    }
  }

  // Euler characteristic of a disc: V - E + F = 1.
  note(std::abs(audit.n_vertices - audit.n_edges + audit.n_elements - 1));
  return audit;
}

/// Dense direct solve of the full constrained saddle operator.
inline Eigen::VectorXd dense_solve(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs) {
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(matrix);
  if (!lu.isInvertible()) throw std::runtime_error("dense oracle: singular system");
  return lu.solve(rhs);
}

}  // namespace oracle

#endif
