#pragma once

// Text input formats.
//
// Polynomial: one rational per line, highest-degree coefficient first.
// Matrix: a line holding n, then n lines of n whitespace-separated rationals.
// Both accept blank lines and '#' comments.

#include <hdnewton/detpoly.hpp>
#include <hdnewton/scalar.hpp>

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hdnewton {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Whitespace-separated tokens of each non-empty line, with its line number.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> content_lines(std::istream& in) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (!tokens.empty()) out.emplace_back(number, std::move(tokens));
  }
  return out;
}

inline Rational parse_at(const std::string& token, std::size_t line) {
  try {
    return parse_rational(token);
  } catch (const std::invalid_argument& e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

inline std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

inline std::vector<Rational> read_coefficients(std::istream& in) {
  std::vector<Rational> coeffs;
  for (const auto& [line, tokens] : detail::content_lines(in)) {
    if (tokens.size() != 1) throw ParseError("line " + std::to_string(line) + ": expected one coefficient");
    coeffs.push_back(detail::parse_at(tokens[0], line));
  }
  if (coeffs.size() < 2) throw ParseError("polynomial needs at least two coefficients");
  return coeffs;
}

inline std::vector<Rational> read_polynomial_file(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return read_coefficients(in);
}

inline SymmetricMatrix read_matrix(std::istream& in) {
  const auto lines = detail::content_lines(in);
  if (lines.empty()) throw ParseError("empty matrix file");
  const auto& [first, head] = lines.front();
  if (head.size() != 1) throw ParseError("line " + std::to_string(first) + ": expected the dimension n");
  std::size_t n = 0;
  try {
    std::size_t used = 0;
    const long v = std::stol(head[0], &used);
    if (used != head[0].size() || v < 1) throw std::invalid_argument("bad");
    n = static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(first) + ": dimension must be a positive integer");
  }
  if (lines.size() != n + 1) throw ParseError("expected " + std::to_string(n) + " matrix rows, found " +
                                              std::to_string(lines.size() - 1));
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [line, tokens] = lines[i + 1];
    if (tokens.size() != n) throw ParseError("line " + std::to_string(line) + ": expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = detail::parse_at(tokens[j], line);
  }
  try {
    return SymmetricMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

inline SymmetricMatrix read_matrix_file(const std::string& path) {
  auto in = detail::open_or_throw(path);
  return read_matrix(in);
}

}  // namespace hdnewton
