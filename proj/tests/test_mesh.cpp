#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "wg/mesh.hpp"

using wg::Diagonal;
using wg::Mesh;
using wg::Vec2;

TEST_CASE("unit mesh connectivity is the frozen two-triangle split", "[mesh]") {
  const Mesh mesh = wg::build_structured(1);
  REQUIRE(mesh.n_vertices() == 4);
  REQUIRE(mesh.n_elements() == 2);
  REQUIRE(mesh.n_edges() == 5);

  // Vertices are numbered row by row, bottom row first.
  CHECK(mesh.vertices[0] == Vec2(0, 0));
  CHECK(mesh.vertices[1] == Vec2(1, 0));
  CHECK(mesh.vertices[2] == Vec2(0, 1));
  CHECK(mesh.vertices[3] == Vec2(1, 1));

  CHECK(mesh.elements[0] == std::array<int, 3>{0, 1, 3});
  CHECK(mesh.elements[1] == std::array<int, 3>{0, 3, 2});

  CHECK(mesh.edge_vertices[0] == std::array<int, 2>{0, 1});  // bottom
  CHECK(mesh.edge_vertices[1] == std::array<int, 2>{1, 3});  // right
  CHECK(mesh.edge_vertices[2] == std::array<int, 2>{0, 3});  // diagonal
  CHECK(mesh.edge_vertices[3] == std::array<int, 2>{2, 3});  // top
  CHECK(mesh.edge_vertices[4] == std::array<int, 2>{0, 2});  // left

  CHECK(mesh.edge_on_boundary(0));
  CHECK(mesh.edge_on_boundary(1));
  CHECK_FALSE(mesh.edge_on_boundary(2));
  CHECK(mesh.edge_on_boundary(3));
  CHECK(mesh.edge_on_boundary(4));

  // The diagonal is shared; its stored normal points from element 1 into
  // element 0 (rotate the lo->hi tangent clockwise).
  CHECK(mesh.edge_elements[2][0] == 0);
  CHECK(mesh.edge_elements[2][1] == 1);
  const Vec2 diag_normal = mesh.edge_normal[2];
  CHECK(diag_normal.x() == Catch::Approx(1.0 / std::sqrt(2.0)));
  CHECK(diag_normal.y() == Catch::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(mesh.edge_sign_in(0, 2) == -1);
  CHECK(mesh.edge_sign_in(1, 2) == 1);

  CHECK(mesh.element_area[0] == Catch::Approx(0.5));
  CHECK(mesh.element_area[1] == Catch::Approx(0.5));
  CHECK(mesh.element_diameter[0] == Catch::Approx(std::sqrt(2.0)));
  CHECK(mesh.max_diameter() == Catch::Approx(std::sqrt(2.0)));
  CHECK(mesh.element_centroid[0].isApprox(Vec2(2.0 / 3.0, 1.0 / 3.0)));
  CHECK(mesh.element_centroid[1].isApprox(Vec2(1.0 / 3.0, 2.0 / 3.0)));
}

TEST_CASE("opposite diagonal produces the mirrored split", "[mesh]") {
  const Mesh mesh = wg::build_structured(1, Diagonal::nw_se);
  REQUIRE(mesh.n_elements() == 2);
  CHECK(mesh.elements[0] == std::array<int, 3>{0, 1, 2});
  CHECK(mesh.elements[1] == std::array<int, 3>{1, 3, 2});
  const auto audit = oracle::audit_mesh(mesh);
  CHECK(audit.worst_defect <= 1e-12);
}

TEST_CASE("structured mesh counts follow the closed forms", "[mesh]") {
  for (int n : {1, 2, 3, 5, 8, 16}) {
    for (Diagonal diag : {Diagonal::ne_sw, Diagonal::nw_se}) {
      const Mesh mesh = wg::build_structured(n, diag);
      INFO("n=" << n);
      CHECK(mesh.n_vertices() == (n + 1) * (n + 1));
      CHECK(mesh.n_elements() == 2 * n * n);
      CHECK(mesh.n_edges() == 3 * n * n + 2 * n);
      CHECK(wg::boundary_edges(mesh).size() == static_cast<size_t>(4 * n));
      CHECK(mesh.max_diameter() == Catch::Approx(std::sqrt(2.0) / n));
    }
  }
}

TEST_CASE("independent mesh audit finds no defects", "[mesh]") {
  for (int n : {1, 2, 5, 9}) {
    for (Diagonal diag : {Diagonal::ne_sw, Diagonal::nw_se}) {
      const Mesh mesh = wg::build_structured(n, diag);
      const auto audit = oracle::audit_mesh(mesh);
      INFO("n=" << n << " worst defect " << audit.worst_defect);
      CHECK(audit.worst_defect <= 1e-12);
      CHECK(audit.n_edges == mesh.n_edges());
      CHECK(audit.n_boundary_edges == 4 * n);
      CHECK(audit.total_area == Catch::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("refining the mesh quarters every element area exactly", "[mesh]") {
  for (int n : {2, 4, 8}) {
    const Mesh coarse = wg::build_structured(n);
    const Mesh fine = wg::build_structured(2 * n);
    for (int t = 0; t < coarse.n_elements(); ++t) {
      CHECK(coarse.element_area[t] == 0.5 / (n * n));  // exact in binary
    }
    for (int t = 0; t < fine.n_elements(); ++t) {
      CHECK(fine.element_area[t] == Catch::Approx(0.25 * coarse.element_area[0]).epsilon(1e-15));
    }
  }
}

TEST_CASE("element edge bookkeeping is self-consistent", "[mesh]") {
  const Mesh mesh = wg::build_structured(4);
  for (int t = 0; t < mesh.n_elements(); ++t) {
    for (size_t i = 0; i < mesh.element_edges[t].size(); ++i) {
      const int e = mesh.element_edges[t][i];
      CHECK(mesh.local_edge_index(t, e) == static_cast<int>(i));
      CHECK(mesh.element_edge_signs[t][i] == mesh.edge_sign_in(t, e));
      // Sign convention: +1 exactly when the stored normal is outward for t.
      const Vec2 outward = mesh.edge_sign_in(t, e) * mesh.edge_normal[e];
      CHECK((mesh.edge_midpoint(e) - mesh.element_centroid[t]).dot(outward) > 0.0);
    }
  }
}

TEST_CASE("edge parametrization hits midpoint and endpoints", "[mesh]") {
  const Mesh mesh = wg::build_structured(3);
  for (int e = 0; e < mesh.n_edges(); ++e) {
    const Vec2 lo = mesh.vertices[mesh.edge_vertices[e][0]];
    const Vec2 hi = mesh.vertices[mesh.edge_vertices[e][1]];
    CHECK((mesh.edge_point(e, -0.5) - lo).norm() <= 1e-15);
    CHECK((mesh.edge_point(e, 0.5) - hi).norm() <= 1e-15);
    CHECK((mesh.edge_midpoint(e) - 0.5 * (lo + hi)).norm() <= 1e-15);
    CHECK(mesh.edge_length[e] == Catch::Approx((hi - lo).norm()));
  }
}

TEST_CASE("invalid subdivision counts are rejected", "[mesh]") {
  CHECK_THROWS_AS(wg::build_structured(0), std::invalid_argument);
  CHECK_THROWS_AS(wg::build_structured(-3), std::invalid_argument);
}
