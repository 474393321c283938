#ifndef WG_VTK_HPP
#define WG_VTK_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wg/analysis.hpp"
#include "wg/mesh.hpp"

namespace wg {

/// Per-element cell data of a flow solution for export.
struct CellData {
  std::vector<double> kappa_inv;
  std::vector<double> pressure;   // element mean values
  std::vector<Vec2> velocity;     // element means of the interior velocity
};

/// Element means of pressure and interior velocity plus the sampled inverse
/// permeability, the quantities written as VTK cell data.
inline CellData collect_cell_data(const FeSpace& space, const BrinkmanProblem& problem,
                                  const WgVelocity& u, const PressureField& p) {
  const Mesh& mesh = space.mesh();
  CellData data;
  data.kappa_inv.resize(mesh.n_elements());
  data.pressure.resize(mesh.n_elements());
  data.velocity.resize(mesh.n_elements());
  std::vector<Vec2> points;
  std::vector<double> weights;
  for (int t = 0; t < mesh.n_elements(); ++t) {
    data.kappa_inv[t] = problem.sample_inv_kappa(mesh.element_centroid[t]);
    double mean_p = 0.0;
    Vec2 mean_u(0.0, 0.0);
    space.element_quadrature(t, space.triangle_rule_assembly(), points, weights);
    for (size_t q = 0; q < points.size(); ++q) {
      mean_p += weights[q] * eval_pressure(space, t, p, points[q]);
      mean_u += weights[q] * eval_interior(space, t, u, points[q]);
    }
    data.pressure[t] = mean_p / mesh.element_area[t];
    data.velocity[t] = mean_u / mesh.element_area[t];
  }
  return data;
}

/// Writes a legacy ASCII VTK unstructured grid with the mesh triangles and
/// the given cell data.
inline void write_vtk(const std::string& path, const Mesh& mesh, const CellData& data,
                      const std::string& title = "porous flow") {
  std::ofstream out(path);
  if (!out) throw InvalidData("vtk: cannot open '" + path + "' for writing");
  out.precision(12);

  const int nc = mesh.n_elements();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const Vec2& v : mesh.vertices) out << v.x() << " " << v.y() << " 0\n";
  out << "CELLS " << nc << " " << 4 * nc << "\n";
  for (const auto& tri : mesh.elements) out << "3 " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  out << "CELL_TYPES " << nc << "\n";
  for (int t = 0; t < nc; ++t) out << "5\n";
  out << "CELL_DATA " << nc << "\n";
  out << "SCALARS kappa_inv double 1\nLOOKUP_TABLE default\n";
  for (double v : data.kappa_inv) out << v << "\n";
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double v : data.pressure) out << v << "\n";
  out << "VECTORS velocity double\n";
  for (const Vec2& v : data.velocity) out << v.x() << " " << v.y() << " 0\n";
  if (!out) throw InvalidData("vtk: write to '" + path + "' failed");
}

/// Structural check of a legacy VTK file written by write_vtk: headers,
/// section sizes, cell arity and cell types must be consistent.  Throws
/// InvalidData on the first violation.
inline void validate_vtk(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidData("vtk: cannot open '" + path + "'");
  const auto fail = [&path](const std::string& what) {
    throw InvalidData("vtk " + path + ": " + what);
  };
  std::string line;
  const auto expect_line = [&](const std::string& expected) {
    if (!std::getline(in, line)) fail("unexpected end of file, expected '" + expected + "'");
    if (line != expected) fail("expected '" + expected + "', got '" + line + "'");
  };

  expect_line("# vtk DataFile Version 3.0");
  if (!std::getline(in, line)) fail("missing title line");
  expect_line("ASCII");
  expect_line("DATASET UNSTRUCTURED_GRID");

  int n_points = 0;
  std::string keyword, type;
  in >> keyword >> n_points >> type;
  if (!in || keyword != "POINTS" || type != "double" || n_points < 1)
    fail("malformed POINTS declaration");
  for (int i = 0; i < 3 * n_points; ++i) {
    double value;
    if (!(in >> value)) fail("POINTS section ended early");
  }

  int n_cells = 0, cell_ints = 0;
  in >> keyword >> n_cells >> cell_ints;
  if (!in || keyword != "CELLS" || n_cells < 1) fail("malformed CELLS declaration");
  if (cell_ints != 4 * n_cells) fail("CELLS size does not match triangle cells");
  for (int c = 0; c < n_cells; ++c) {
    int arity;
    if (!(in >> arity) || arity != 3) fail("non-triangle cell in CELLS");
    for (int i = 0; i < 3; ++i) {
      int vertex;
      if (!(in >> vertex) || vertex < 0 || vertex >= n_points)
        fail("cell vertex index out of range");
    }
  }

  int n_types = 0;
  in >> keyword >> n_types;
  if (!in || keyword != "CELL_TYPES" || n_types != n_cells) fail("malformed CELL_TYPES");
  for (int c = 0; c < n_cells; ++c) {
    int cell_type;
    if (!(in >> cell_type) || cell_type != 5) fail("cell type is not triangle (5)");
  }

  int n_data = 0;
  in >> keyword >> n_data;
  if (!in || keyword != "CELL_DATA" || n_data != n_cells) fail("malformed CELL_DATA");

  for (const std::string name : {"kappa_inv", "pressure"}) {
    std::string data_name, data_type, components;
    in >> keyword >> data_name >> data_type >> components;
    if (!in || keyword != "SCALARS" || data_name != name || data_type != "double" ||
        components != "1")
      fail("malformed SCALARS declaration for " + name);
    in >> keyword >> data_type;
    if (!in || keyword != "LOOKUP_TABLE" || data_type != "default")
      fail("missing LOOKUP_TABLE for " + name);
    for (int c = 0; c < n_cells; ++c) {
      double value;
      if (!(in >> value)) fail(name + " data ended early");
    }
  }

  in >> keyword >> type >> line;
  if (!in || keyword != "VECTORS" || type != "velocity" || line != "double")
    fail("malformed VECTORS declaration");
  for (int i = 0; i < 3 * n_cells; ++i) {
    double value;
    if (!(in >> value)) fail("velocity data ended early");
  }
}

}  // namespace wg

#endif
