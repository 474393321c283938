#ifndef WG_MESH_HPP
#define WG_MESH_HPP

#include <algorithm>
#include <array>
#include <map>
#include <vector>

#include "wg/common.hpp"

namespace wg {

/// Split direction of the square cells of a structured mesh.
enum class Diagonal {
  ne_sw,  // diagonal from the lower-left to the upper-right corner
  nw_se,  // diagonal from the upper-left to the lower-right corner
};

/// Conforming triangulation of the unit square.
///
/// Elements store their vertices counterclockwise.  Every edge is stored
/// once, oriented from its lower to its higher vertex index, with unit
/// normal obtained by rotating the unit tangent clockwise.  An element's
/// incidence sign is +1 when the global edge normal is outward for that
/// element and -1 otherwise.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> elements;

  std::vector<std::array<int, 2>> edge_vertices;   // lo < hi
  std::vector<double> edge_length;
  std::vector<Vec2> edge_normal;
  std::vector<std::array<int, 2>> edge_elements;   // incident elements, -1 when absent

  std::vector<std::vector<int>> element_edges;     // 3 edges per triangle
  std::vector<std::vector<int>> element_edge_signs;

  std::vector<double> element_area;
  std::vector<double> element_diameter;            // longest side
  std::vector<Vec2> element_centroid;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_elements() const { return static_cast<int>(elements.size()); }
  int n_edges() const { return static_cast<int>(edge_vertices.size()); }

  bool edge_on_boundary(int e) const { return edge_elements[e][1] < 0; }

  /// Mesh size h: the largest element diameter.
  double max_diameter() const {
    return *std::max_element(element_diameter.begin(), element_diameter.end());
  }

  /// Position of edge e in element t's edge list.
  int local_edge_index(int t, int e) const {
    const auto& edges = element_edges[t];
    for (size_t i = 0; i < edges.size(); ++i) {
      if (edges[i] == e) return static_cast<int>(i);
    }
    throw InternalError("edge is not incident to the element");
  }

  /// +1 when the global normal of edge e points out of element t.
  int edge_sign_in(int t, int e) const {
    return element_edge_signs[t][local_edge_index(t, e)];
  }

  Vec2 edge_midpoint(int e) const {
    return 0.5 * (vertices[edge_vertices[e][0]] + vertices[edge_vertices[e][1]]);
  }

  /// Point on edge e at arc-length parameter s in [-1/2, 1/2].
  Vec2 edge_point(int e, double s) const {
    const Vec2& lo = vertices[edge_vertices[e][0]];
    const Vec2& hi = vertices[edge_vertices[e][1]];
    return edge_midpoint(e) + s * (hi - lo);
  }
};

/// Indices of all edges lying on the domain boundary.
inline std::vector<int> boundary_edges(const Mesh& mesh) {
  std::vector<int> result;
  for (int e = 0; e < mesh.n_edges(); ++e) {
    if (mesh.edge_on_boundary(e)) result.push_back(e);
  }
  return result;
}

namespace detail {

inline void finalize_mesh(Mesh& mesh) {
  std::map<std::array<int, 2>, int> edge_index;
  const int n_elem = mesh.n_elements();
  mesh.element_edges.assign(n_elem, {});
  mesh.element_edge_signs.assign(n_elem, {});
  mesh.element_area.resize(n_elem);
  mesh.element_diameter.resize(n_elem);
  mesh.element_centroid.resize(n_elem);

  for (int t = 0; t < n_elem; ++t) {
    const auto& tri = mesh.elements[t];
    const Vec2& p0 = mesh.vertices[tri[0]];
    const Vec2& p1 = mesh.vertices[tri[1]];
    const Vec2& p2 = mesh.vertices[tri[2]];

    const double twice_area = (p1.x() - p0.x()) * (p2.y() - p0.y()) -
                              (p2.x() - p0.x()) * (p1.y() - p0.y());
    if (twice_area <= 0.0) throw InternalError("element vertices are not counterclockwise");
    mesh.element_area[t] = 0.5 * twice_area;
    mesh.element_diameter[t] =
        std::max({(p1 - p0).norm(), (p2 - p1).norm(), (p0 - p2).norm()});
    mesh.element_centroid[t] = (p0 + p1 + p2) / 3.0;

    for (int i = 0; i < 3; ++i) {
      const int a = tri[i];
      const int b = tri[(i + 1) % 3];
      const std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
      auto [it, inserted] = edge_index.try_emplace(key, mesh.n_edges());
      if (inserted) {
        mesh.edge_vertices.push_back(key);
        mesh.edge_elements.push_back({t, -1});
      } else {
        if (mesh.edge_elements[it->second][1] >= 0)
          throw InternalError("edge shared by more than two elements");
        mesh.edge_elements[it->second][1] = t;
      }
      mesh.element_edges[t].push_back(it->second);
      // Traversal a->b is counterclockwise in t, so the outward normal is the
      // clockwise rotation of b-a; it matches the global normal exactly when
      // the traversal runs from the lower to the higher vertex index.
      mesh.element_edge_signs[t].push_back(a < b ? 1 : -1);
    }
  }

  mesh.edge_length.resize(mesh.n_edges());
  mesh.edge_normal.resize(mesh.n_edges());
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Vec2 d = mesh.vertices[mesh.edge_vertices[e][1]] -
                   mesh.vertices[mesh.edge_vertices[e][0]];
    const double len = d.norm();
    mesh.edge_length[e] = len;
    mesh.edge_normal[e] = Vec2(d.y() / len, -d.x() / len);
  }
}

}  // namespace detail

/// Uniform n x n triangulation of the unit square: each of the n^2 cells is
/// split into two triangles along the requested diagonal.
inline Mesh build_structured(int n, Diagonal diagonal = Diagonal::ne_sw) {
  if (n < 1) throw std::invalid_argument("build_structured: n must be at least 1");

  Mesh mesh;
  const double step = 1.0 / n;
  mesh.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices.emplace_back(i * step, j * step);
    }
  }

  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  mesh.elements.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (diagonal == Diagonal::ne_sw) {
        mesh.elements.push_back({v00, v10, v11});
        mesh.elements.push_back({v00, v11, v01});
      } else {
        mesh.elements.push_back({v00, v10, v01});
        mesh.elements.push_back({v10, v11, v01});
      }
    }
  }

  detail::finalize_mesh(mesh);
  return mesh;
}

}  // namespace wg

#endif
