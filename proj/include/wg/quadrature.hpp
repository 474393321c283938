#ifndef WG_QUADRATURE_HPP
#define WG_QUADRATURE_HPP

#include <cmath>
#include <vector>

#include "wg/common.hpp"

namespace wg {

/// Quadrature on the reference segment [-1/2, 1/2]; weights sum to 1.
struct SegmentQuadrature {
  int degree = 0;  // integrates polynomials up to this degree exactly
  std::vector<double> points;
  std::vector<double> weights;
};

/// Quadrature on the reference triangle (0,0)-(1,0)-(0,1); weights sum to 1/2.
struct TriangleQuadrature {
  int degree = 0;
  std::vector<Vec2> points;
  std::vector<double> weights;
};

namespace detail {

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace detail

/// Rule exact for polynomials of the given degree on [-1/2, 1/2].
inline SegmentQuadrature segment_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("segment_rule: degree must be nonnegative");
  const int n = degree / 2 + 1;
  std::vector<double> x, w;
  detail::gauss_legendre(n, x, w);
  SegmentQuadrature rule;
  rule.degree = 2 * n - 1;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.points[i] = 0.5 * x[i];
    rule.weights[i] = 0.5 * w[i];
  }
  return rule;
}

/// Rule exact for polynomials of the given degree on the reference triangle,
/// built by collapsing a tensor Gauss-Legendre rule on the unit square
/// through the map (u, v) -> (u, v(1-u)) with Jacobian (1-u).
inline TriangleQuadrature triangle_rule(int degree) {
  if (degree < 0) throw std::invalid_argument("triangle_rule: degree must be nonnegative");
  const int nu = (degree + 1) / 2 + 1;  // the Jacobian raises the u-degree by one
  const int nv = degree / 2 + 1;
  std::vector<double> xu, wu, xv, wv;
  detail::gauss_legendre(nu, xu, wu);
  detail::gauss_legendre(nv, xv, wv);
  TriangleQuadrature rule;
  rule.degree = degree;
  rule.points.reserve(nu * nv);
  rule.weights.reserve(nu * nv);
  for (int i = 0; i < nu; ++i) {
    const double u = 0.5 * (xu[i] + 1.0);
    for (int j = 0; j < nv; ++j) {
      const double v = 0.5 * (xv[j] + 1.0);
      rule.points.emplace_back(u, v * (1.0 - u));
      rule.weights.push_back(0.25 * wu[i] * wv[j] * (1.0 - u));
    }
  }
  return rule;
}

/// Exact integral of x^a y^b over the reference triangle: a! b! / (a+b+2)!.
inline double reference_triangle_monomial_integral(int a, int b) {
  // Computed as prod_{i=1..b} i/(a+i) / ((a+b+1)(a+b+2)) to avoid factorial overflow.
  double value = 1.0;
  for (int i = 1; i <= b; ++i) value *= static_cast<double>(i) / (a + i);
  value /= static_cast<double>(a + b + 1) * (a + b + 2);
  return value;
}

/// Largest relative error of the rule on the monomials it claims to integrate
/// exactly; used by the startup self-test.
inline double triangle_rule_self_test(const TriangleQuadrature& rule) {
  double worst = 0.0;
  for (int a = 0; a + 0 <= rule.degree; ++a) {
    for (int b = 0; a + b <= rule.degree; ++b) {
      double sum = 0.0;
      for (size_t q = 0; q < rule.points.size(); ++q) {
        sum += rule.weights[q] * std::pow(rule.points[q].x(), a) *
               std::pow(rule.points[q].y(), b);
      }
      const double exact = reference_triangle_monomial_integral(a, b);
      worst = std::max(worst, std::abs(sum - exact) / std::abs(exact));
    }
  }
  return worst;
}

inline double segment_rule_self_test(const SegmentQuadrature& rule) {
  double worst = 0.0;
  for (int a = 0; a <= rule.degree; ++a) {
    double sum = 0.0;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      sum += rule.weights[q] * std::pow(rule.points[q], a);
    }
    // Odd powers integrate to zero on the symmetric segment.
    const double exact = (a % 2 == 0) ? 1.0 / ((a + 1) * std::pow(2.0, a)) : 0.0;
    worst = std::max(worst, std::abs(sum - exact));
  }
  return worst;
}

/// Validates a pair of rules against analytic monomial integrals.
inline void verify_rules(const TriangleQuadrature& tri, const SegmentQuadrature& seg,
                         double tolerance = 1e-13) {
  if (triangle_rule_self_test(tri) > tolerance)
    throw InternalError("triangle quadrature failed its exactness self-test");
  if (segment_rule_self_test(seg) > tolerance)
    throw InternalError("segment quadrature failed its exactness self-test");
}

}  // namespace wg

#endif
