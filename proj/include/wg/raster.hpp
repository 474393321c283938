#ifndef WG_RASTER_HPP
#define WG_RASTER_HPP

#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wg/problem.hpp"

namespace wg {

/// Cell-centered grid of values over the unit square; row 0 is the top of
/// the domain (y near 1), columns run left to right.
struct Raster {
  int ncols = 0;
  int nrows = 0;
  std::vector<double> values;  // row-major, nrows x ncols

  double at(int row, int col) const { return values[row * ncols + col]; }

  /// Value of the cell containing (x, y), clamping to the nearest cell on
  /// and beyond the boundary.
  double sample(const Vec2& p) const {
    auto clamp = [](int v, int hi) { return v < 0 ? 0 : (v > hi ? hi : v); };
    const int col = clamp(static_cast<int>(std::floor(p.x() * ncols)), ncols - 1);
    const int row = clamp(static_cast<int>(std::floor((1.0 - p.y()) * nrows)), nrows - 1);
    return at(row, col);
  }
};

/// Reads a raster file: a header line "ncols nrows" followed by nrows lines
/// of ncols whitespace-separated numbers, top row first.
inline Raster load_raster(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("raster: cannot open '" + path + "'");
  const auto fail = [&path](int line, const std::string& what) {
    throw ParseError("raster " + path + ":" + std::to_string(line) + ": " + what);
  };

  Raster raster;
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) fail(1, "missing header line 'ncols nrows'");
  ++line_no;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> raster.ncols >> raster.nrows) || (header >> extra))
      fail(line_no, "header must be exactly 'ncols nrows'");
    if (raster.ncols < 1 || raster.nrows < 1)
      fail(line_no, "raster dimensions must be at least 1 x 1");
  }

  raster.values.reserve(static_cast<size_t>(raster.ncols) * raster.nrows);
  for (int row = 0; row < raster.nrows; ++row) {
    if (!std::getline(in, line))
      fail(line_no + 1, "expected " + std::to_string(raster.nrows) + " data rows, got " +
                            std::to_string(row));
    ++line_no;
    std::istringstream values(line);
    for (int col = 0; col < raster.ncols; ++col) {
      double v = 0.0;
      if (!(values >> v))
        fail(line_no, "expected " + std::to_string(raster.ncols) + " values, got " +
                          std::to_string(col));
      raster.values.push_back(v);
    }
    std::string extra;
    if (values >> extra) fail(line_no, "trailing content after the last value");
  }
  return raster;
}

/// Inverse permeability sampler backed by a raster.  Without a range the
/// raster values are kappa^{-1} directly; with one, the raster's value range
/// is mapped linearly onto [kappa_inv_min, kappa_inv_max].
inline PermeabilityField raster_permeability(
    Raster raster, std::optional<std::pair<double, double>> range = std::nullopt) {
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : raster.values) {
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }

  if (range) {
    const auto [kmin, kmax] = *range;
    if (!(kmin > 0.0) || kmin > kmax)
      throw InvalidData("raster value map must satisfy 0 < kappa_inv_min <= kappa_inv_max");
    const double span = vmax - vmin;
    for (double& v : raster.values) {
      v = span > 0.0 ? kmin + (v - vmin) / span * (kmax - kmin) : kmin;
    }
    vmin = kmin;
    vmax = span > 0.0 ? kmax : kmin;
  } else if (!(vmin > 0.0)) {
    throw InvalidData("raster maps to a non-positive inverse permeability; "
                      "provide a positive value range");
  }

  PermeabilityField field;
  auto shared = std::make_shared<Raster>(std::move(raster));
  field.inv_kappa = [shared](const Vec2& p) { return shared->sample(p); };
  field.lambda_min = vmin;
  field.lambda_max = vmax;
  field.kind = "raster";
  return field;
}

}  // namespace wg

#endif
