#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "wg/basis.hpp"
#include "wg/quadrature.hpp"

namespace {
double segment_monomial_exact(int j) {
  // Integral of s^j over [-1/2, 1/2].
  if (j % 2 == 1) return 0.0;
  return 2.0 * std::pow(0.5, j + 1) / (j + 1);
}
}  // namespace

TEST_CASE("reference triangle monomial formula matches adaptive integration", "[quadrature]") {
  const wg::Vec2 p0(0, 0), p1(1, 0), p2(0, 1);
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      const double romberg = oracle::triangle_integral(
          p0, p1, p2, [&](const wg::Vec2& p) { return std::pow(p.x(), a) * std::pow(p.y(), b); });
      INFO("a=" << a << " b=" << b);
      CHECK(wg::reference_triangle_monomial_integral(a, b) ==
            Catch::Approx(romberg).epsilon(1e-11).margin(1e-13));
    }
  }
}

TEST_CASE("segment rules integrate monomials to their stated degree", "[quadrature]") {
  for (int degree : {1, 2, 4, 6, 10, 12}) {
    const wg::SegmentQuadrature rule = wg::segment_rule(degree);
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == Catch::Approx(1.0).epsilon(1e-14));
    for (int j = 0; j <= degree; ++j) {
      double sum = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q)
        sum += rule.weights[q] * std::pow(rule.points[q], j);
      INFO("degree=" << degree << " monomial " << j);
      CHECK(sum == Catch::Approx(segment_monomial_exact(j)).margin(1e-14));
    }
    CHECK(wg::segment_rule_self_test(rule) <= 1e-13);
  }
}

TEST_CASE("triangle rules integrate monomials to their stated degree", "[quadrature]") {
  for (int degree : {1, 2, 4, 6, 10, 12}) {
    const wg::TriangleQuadrature rule = wg::triangle_rule(degree);
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == Catch::Approx(0.5).epsilon(1e-14));
    for (int a = 0; a + 0 <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        double sum = 0.0;
        for (size_t q = 0; q < rule.points.size(); ++q)
          sum += rule.weights[q] * std::pow(rule.points[q].x(), a) *
                 std::pow(rule.points[q].y(), b);
        INFO("degree=" << degree << " monomial x^" << a << " y^" << b);
        CHECK(sum == Catch::Approx(wg::reference_triangle_monomial_integral(a, b)).margin(1e-14));
      }
    }
    CHECK(wg::triangle_rule_self_test(rule) <= 1e-13);
  }
}

TEST_CASE("high-order triangle rule handles smooth non-polynomial data", "[quadrature]") {
  const wg::TriangleQuadrature rule = wg::triangle_rule(12);
  double sum = 0.0;
  for (size_t q = 0; q < rule.points.size(); ++q)
    sum += rule.weights[q] * std::sin(rule.points[q].x() + 2.0 * rule.points[q].y());
  const double exact = oracle::triangle_integral(
      wg::Vec2(0, 0), wg::Vec2(1, 0), wg::Vec2(0, 1),
      [](const wg::Vec2& p) { return std::sin(p.x() + 2.0 * p.y()); });
  CHECK(sum == Catch::Approx(exact).epsilon(1e-11));
}

TEST_CASE("rule verification rejects a broken rule", "[quadrature]") {
  wg::TriangleQuadrature tri = wg::triangle_rule(4);
  wg::SegmentQuadrature seg = wg::segment_rule(4);
  CHECK_NOTHROW(wg::verify_rules(tri, seg));
  tri.weights[0] += 1e-6;
  CHECK_THROWS(wg::verify_rules(tri, seg));
}

TEST_CASE("scaled monomial basis evaluates and differentiates correctly", "[quadrature]") {
  const wg::Vec2 center(0.3, 0.7);
  const double scale = 0.25;
  const wg::ElementBasis basis(2, center, scale);
  REQUIRE(basis.size() == 6);

  const wg::Vec2 p(0.45, 0.6);
  const double X = (p.x() - center.x()) / scale;
  const double Y = (p.y() - center.y()) / scale;
  const Eigen::VectorXd values = basis.eval(p);
  const Eigen::VectorXd expected =
      (Eigen::VectorXd(6) << 1.0, X, Y, X * X, X * Y, Y * Y).finished();
  CHECK((values - expected).cwiseAbs().maxCoeff() <= 1e-14);

  // Gradients against central differences in physical coordinates.
  const double eps = 1e-6;
  const Eigen::MatrixXd grads = basis.eval_grad(p);
  const Eigen::VectorXd dx =
      (basis.eval(p + wg::Vec2(eps, 0)) - basis.eval(p - wg::Vec2(eps, 0))) / (2 * eps);
  const Eigen::VectorXd dy =
      (basis.eval(p + wg::Vec2(0, eps)) - basis.eval(p - wg::Vec2(0, eps))) / (2 * eps);
  CHECK((grads.col(0) - dx).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((grads.col(1) - dy).cwiseAbs().maxCoeff() <= 1e-8);

  // At the centroid every non-constant monomial vanishes.
  const Eigen::VectorXd at_center = basis.eval(center);
  CHECK(at_center[0] == 1.0);
  CHECK(at_center.tail(5).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("monomial exponents are graded lexicographic", "[quadrature]") {
  const auto exps = wg::monomial_exponents(2);
  REQUIRE(exps.size() == 6);
  CHECK(exps[0] == std::array<int, 2>{0, 0});
  CHECK(exps[1] == std::array<int, 2>{1, 0});
  CHECK(exps[2] == std::array<int, 2>{0, 1});
  CHECK(exps[3] == std::array<int, 2>{2, 0});
  CHECK(exps[4] == std::array<int, 2>{1, 1});
  CHECK(exps[5] == std::array<int, 2>{0, 2});
  CHECK(wg::poly_dim(1) == 3);
  CHECK(wg::poly_dim(0) == 1);
  CHECK(wg::poly_dim(-1) == 0);
}

TEST_CASE("edge basis spans arc-length monomials", "[quadrature]") {
  const wg::EdgeBasis basis(2);
  REQUIRE(basis.size() == 3);
  const double s = 0.37;
  const Eigen::VectorXd values = basis.eval(s);
  CHECK(values[0] == Catch::Approx(1.0));
  CHECK(values[1] == Catch::Approx(s));
  CHECK(values[2] == Catch::Approx(s * s));
}
