#pragma once

// Minimal CSV plumbing: headerless numeric matrices in, estimates out.
// All numeric output uses shortest round-trip decimal form.

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpest/core.hpp"

namespace dpest {

/// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::vector<std::vector<double>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const std::string field = line.substr(pos, comma - pos);
      try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("csv: bad number '" + field + "' at line " +
                                    std::to_string(lineno));
      }
      pos = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::invalid_argument("csv: ragged row at line " +
                                  std::to_string(lineno));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline DataMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  const auto rows = read_csv_rows(in);
  if (rows.empty()) throw std::invalid_argument("csv: empty file " + path);
  const std::size_t n = rows.size(), d = rows.front().size();
  std::vector<double> values;
  values.reserve(n * d);
  for (const auto& r : rows) values.insert(values.end(), r.begin(), r.end());
  return DataMatrix(n, d, std::move(values));
}

/// Last column is the response; the rest form the design.
inline RegressionData read_regression_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  const auto rows = read_csv_rows(in);
  if (rows.empty()) throw std::invalid_argument("csv: empty file " + path);
  const std::size_t d = rows.front().size();
  if (d < 2) {
    throw std::invalid_argument("csv: regression input needs >= 2 columns");
  }
  std::vector<double> values, y;
  for (const auto& r : rows) {
    values.insert(values.end(), r.begin(), r.end() - 1);
    y.push_back(r.back());
  }
  DataMatrix x(rows.size(), d - 1, std::move(values));
  return RegressionData(std::move(x), std::move(y));
}

inline std::string vector_to_csv(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += ',';
    out += format_double(v[i]);
  }
  out += '\n';
  return out;
}

}  // namespace dpest
