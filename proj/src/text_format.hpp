// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

// Shared helpers for the line-oriented text formats.

#pragma once

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace trajlift::text {

// Shortest decimal that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline void write_row(std::ostream& os, const double* values, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (i) os << ' ';
    os << format_double(values[i]);
  }
  os << '\n';
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::optional<double> parse_double(std::string_view token) {
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    return std::nullopt;
  return v;
}

inline std::optional<long long> parse_int(std::string_view token) {
  long long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    return std::nullopt;
  return v;
}

// Parses "key=value" tokens following a magic prefix. Returns nullopt when a
// token lacks '='.
inline std::optional<std::map<std::string, std::string>> parse_fields(
    const std::vector<std::string_view>& tokens, std::size_t first) {
  std::map<std::string, std::string> out;
  for (std::size_t i = first; i < tokens.size(); ++i) {
    auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos || eq == 0) return std::nullopt;
    out.emplace(std::string(tokens[i].substr(0, eq)),
                std::string(tokens[i].substr(eq + 1)));
  }
  return out;
}

}  // namespace trajlift::text
