#ifndef WG_BASIS_HPP
#define WG_BASIS_HPP

#include <array>
#include <cmath>
#include <vector>

#include "wg/common.hpp"

namespace wg {

/// Dimension of the polynomial space P_m on a triangle.
inline int poly_dim(int m) { return m < 0 ? 0 : (m + 1) * (m + 2) / 2; }

/// x^n for small nonnegative integer n.
inline double powi(double x, int n) {
  double value = 1.0;
  for (int i = 0; i < n; ++i) value *= x;
  return value;
}

/// Exponent pairs of the monomial basis of P_m in graded lexicographic order:
/// 1, x, y, x^2, xy, y^2, ...
inline std::vector<std::array<int, 2>> monomial_exponents(int m) {
  std::vector<std::array<int, 2>> exps;
  exps.reserve(poly_dim(m));
  for (int total = 0; total <= m; ++total) {
    for (int b = 0; b <= total; ++b) exps.push_back({total - b, b});
  }
  return exps;
}

/// Monomial basis of P_m scaled to an element frame: each basis function is
/// ((x - cx)/h)^a ((y - cy)/h)^b, so its values stay O(1) on the element.
struct ElementBasis {
  int order;
  Vec2 center;
  double scale;
  std::vector<std::array<int, 2>> exponents;

  ElementBasis(int m, const Vec2& c, double h)
      : order(m), center(c), scale(h), exponents(monomial_exponents(m)) {}

  int size() const { return static_cast<int>(exponents.size()); }

  Eigen::VectorXd eval(const Vec2& p) const {
    const double x = (p.x() - center.x()) / scale;
    const double y = (p.y() - center.y()) / scale;
    Eigen::VectorXd values(size());
    for (int i = 0; i < size(); ++i) {
      values[i] = powi(x, exponents[i][0]) * powi(y, exponents[i][1]);
    }
    return values;
  }

  /// Gradients in physical coordinates; row i is (d/dx, d/dy) of basis i.
  Eigen::MatrixXd eval_grad(const Vec2& p) const {
    const double x = (p.x() - center.x()) / scale;
    const double y = (p.y() - center.y()) / scale;
    Eigen::MatrixXd grads(size(), 2);
    for (int i = 0; i < size(); ++i) {
      const int a = exponents[i][0];
      const int b = exponents[i][1];
      grads(i, 0) = a == 0 ? 0.0 : a * powi(x, a - 1) * powi(y, b) / scale;
      grads(i, 1) = b == 0 ? 0.0 : b * powi(x, a) * powi(y, b - 1) / scale;
    }
    return grads;
  }
};

/// Monomial basis 1, s, s^2, ... of P_m on an edge, in the arc-length
/// parameter s in [-1/2, 1/2] of the edge's global orientation.
struct EdgeBasis {
  int order;

  explicit EdgeBasis(int m) : order(m) {}

  int size() const { return order + 1; }

  Eigen::VectorXd eval(double s) const {
    Eigen::VectorXd values(size());
    double power = 1.0;
    for (int i = 0; i < size(); ++i) {
      values[i] = power;
      power *= s;
    }
    return values;
  }
};

}  // namespace wg

#endif
