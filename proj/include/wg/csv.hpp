#ifndef WG_CSV_HPP
#define WG_CSV_HPP

#include <array>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wg/analysis.hpp"

namespace wg {

/// One parsed row of the convergence table: mesh size, the four error
/// columns, and the rates (absent in the first row).
struct ErrorTableRow {
  double h = 0.0;
  std::array<double, 4> errors{};
  std::array<std::optional<double>, 4> rates{};
};

namespace detail {

inline std::string format_double(const char* fmt, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), fmt, value);
  return buffer;
}

}  // namespace detail

inline constexpr const char* error_table_header = "h,e_tbar,rate,e_l2proj,rate,e_l2,rate,e_press,rate";

/// Serializes table rows: h in shortest form, errors with three significant
/// digits in scientific notation, rates with two decimals, '.' decimal point.
inline std::string format_error_table(const std::vector<ErrorTableRow>& rows) {
  std::ostringstream out;
  out << error_table_header << "\n";
  for (const ErrorTableRow& row : rows) {
    out << detail::format_double("%.6g", row.h);
    for (int c = 0; c < 4; ++c) {
      out << "," << detail::format_double("%.2e", row.errors[c]) << ",";
      if (row.rates[c]) out << detail::format_double("%.2f", *row.rates[c]);
    }
    out << "\n";
  }
  return out.str();
}

/// Rows of the four tabled error columns with rates between consecutive rows.
inline std::vector<ErrorTableRow> error_table_rows(const ErrorReport& report) {
  const auto rates = error_rates(report);
  std::vector<ErrorTableRow> rows;
  for (size_t i = 0; i < report.rows.size(); ++i) {
    ErrorTableRow row;
    row.h = report.rows[i].h;
    row.errors = {report.rows[i].e_tbar, report.rows[i].e_l2proj, report.rows[i].e_l2,
                  report.rows[i].e_press};
    if (i > 0) {
      for (int c = 0; c < 4; ++c) row.rates[c] = rates[i - 1][c];
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_error_table(const ErrorReport& report) {
  return format_error_table(error_table_rows(report));
}

/// Parses a serialized convergence table.  Comment lines (leading '#') are
/// skipped; any structural problem reports its line number.
inline std::vector<ErrorTableRow> parse_error_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  const auto fail = [&line_no](const std::string& what) {
    throw ParseError("error table line " + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) fail("missing header");
  ++line_no;
  if (line != error_table_header) fail("unexpected header '" + line + "'");

  std::vector<ErrorTableRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream fields_in(line);
    while (std::getline(fields_in, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 9) fail("expected 9 fields, got " + std::to_string(fields.size()));

    const auto to_double = [&fail](const std::string& s) {
      size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(s, &used);
      } catch (const std::exception&) {
        fail("not a number: '" + s + "'");
      }
      if (used != s.size()) fail("trailing characters in number: '" + s + "'");
      return value;
    };

    ErrorTableRow row;
    row.h = to_double(fields[0]);
    for (int c = 0; c < 4; ++c) {
      row.errors[c] = to_double(fields[1 + 2 * c]);
      const std::string& rate = fields[2 + 2 * c];
      if (!rate.empty()) row.rates[c] = to_double(rate);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace wg

#endif
