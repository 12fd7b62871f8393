#pragma once

// State files and number formatting shared by the command-line tools.
//
// State file format (UTF-8 text, one `key = value` per line, '#' comments):
//
//   dim_a = 2
//   dim_b = 2
//   matrix = [0.5, 0] [0, 0] [0, 0] [0.5, 0]
//            [0, 0] [0, 0] [0, 0] [0, 0]
//            ...
//
// `matrix` holds (dim_a*dim_b)^2 entries in row-major order as [re, im]
// pairs; it may continue over any number of following lines that do not
// contain '='.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "minq/states.hpp"

namespace minq {

struct StateFile {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<Complex> matrix;  // row-major
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(std::string_view text, int line, const char* field) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ", field " + field + ": '" + t + "' is not a finite number");
  }
  return v;
}

inline int parse_dim(std::string_view text, int line, const char* field) {
  const std::string t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || v < 1) {
    throw InputError("line " + std::to_string(line) + ", field " + field + ": '" + t +
                     "' is not a positive integer");
  }
  return v;
}

/// Appends every [re, im] pair found in `text`.
inline void parse_pairs(std::string_view text, int line, std::vector<Complex>& out) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      ++pos;
      continue;
    }
    if (c != '[') {
      throw InputError("line " + std::to_string(line) + ", field matrix: expected '[' at column " +
                       std::to_string(pos + 1));
    }
    const auto close = text.find(']', pos);
    if (close == std::string_view::npos) {
      throw InputError("line " + std::to_string(line) + ", field matrix: unterminated [re, im] pair");
    }
    const auto inner = text.substr(pos + 1, close - pos - 1);
    const auto comma = inner.find(',');
    if (comma == std::string_view::npos || inner.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("line " + std::to_string(line) + ", field matrix: entry must be [re, im]");
    }
    const double re = parse_double(inner.substr(0, comma), line, "matrix");
    const double im = parse_double(inner.substr(comma + 1), line, "matrix");
    out.emplace_back(re, im);
    pos = close + 1;
  }
}

}  // namespace detail

inline StateFile parse_state_file(std::istream& in) {
  StateFile sf;
  bool have_a = false, have_b = false, have_matrix = false, in_matrix = false;
  int matrix_line = 0;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    if (detail::trim(text).empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      if (!in_matrix) throw InputError("line " + std::to_string(line) + ": expected 'key = value'");
      detail::parse_pairs(text, line, sf.matrix);
      continue;
    }
    in_matrix = false;
    const std::string key = detail::trim(text.substr(0, eq));
    const auto value = text.substr(eq + 1);
    if (key == "dim_a") {
      if (have_a) throw InputError("line " + std::to_string(line) + ": duplicate field dim_a");
      sf.dim_a = detail::parse_dim(value, line, "dim_a");
      have_a = true;
    } else if (key == "dim_b") {
      if (have_b) throw InputError("line " + std::to_string(line) + ": duplicate field dim_b");
      sf.dim_b = detail::parse_dim(value, line, "dim_b");
      have_b = true;
    } else if (key == "matrix") {
      if (have_matrix) throw InputError("line " + std::to_string(line) + ": duplicate field matrix");
      have_matrix = in_matrix = true;
      matrix_line = line;
      detail::parse_pairs(value, line, sf.matrix);
    } else {
      throw InputError("line " + std::to_string(line) + ": unknown field '" + key + "'");
    }
  }
  if (!have_a) throw InputError("missing field dim_a");
  if (!have_b) throw InputError("missing field dim_b");
  if (!have_matrix) throw InputError("missing field matrix");
  const std::size_t d = static_cast<std::size_t>(sf.dim_a) * sf.dim_b;
  if (sf.matrix.size() != d * d) {
    throw InputError("line " + std::to_string(matrix_line) + ", field matrix: expected " + std::to_string(d * d) +
                     " entries, found " + std::to_string(sf.matrix.size()));
  }
  return sf;
}

/// Parses and validates; the InputError message names the violated invariant.
inline DensityMatrix to_density_matrix(const StateFile& sf) {
  const int d = sf.dim_a * sf.dim_b;
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = sf.matrix[static_cast<std::size_t>(i * d + j)];
  return DensityMatrix::from_matrix(m, sf.dim_a, sf.dim_b);
}

inline DensityMatrix load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open state file '" + path + "'");
  try {
    return to_density_matrix(parse_state_file(in));
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

inline std::string format_state_file(const DensityMatrix& rho) {
  std::ostringstream out;
  out << "dim_a = " << rho.dim_a() << "\n";
  out << "dim_b = " << rho.dim_b() << "\n";
  out << "matrix =";
  const auto& m = rho.matrix();
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i > 0) out << "        ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " [%.17g, %.17g]", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

/// Nine significant digits, the precision of every printed value.
inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline double round_to_printed(double v) { return std::strtod(format_value(v).c_str(), nullptr); }

}  // namespace minq
