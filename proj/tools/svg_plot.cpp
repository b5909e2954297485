// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0

#include "svg_plot.hpp"

#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>

namespace trajlift_cli {

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed two-decimal pixel coordinates keep the output byte-stable.
std::string px(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
  return std::string(buf, r.ptr);
}

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

CsvTable read_csv(std::istream& is, const std::string& source) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_commas(line);
    if (t.header.empty()) {
      if (cells.size() < 2)
        throw Failure(kExitIo, source + ":" + std::to_string(line_no) +
                                   ": need an x column and at least one series");
      t.header = cells;
      continue;
    }
    if (cells.size() != t.header.size())
      throw Failure(kExitIo, source + ":" + std::to_string(line_no) +
                                 ": expected " + std::to_string(t.header.size()) +
                                 " fields");
    std::vector<double> row;
    for (const auto& c : cells) {
      double v = 0;
      const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size() || !std::isfinite(v))
        throw Failure(kExitIo, source + ":" + std::to_string(line_no) +
                                   ": not a number: '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw Failure(kExitIo, source + ": empty CSV");
  if (t.rows.empty()) throw Failure(kExitUsage, source + ": CSV has no data rows");
  return t;
}

std::string render_svg(const CsvTable& table, const PlotOptions& options) {
  const double left = 70, right = 20, top = 40, bottom = 50;
  const double w = options.width, h = options.height;
  const double pw = w - left - right, ph = h - top - bottom;
  const auto ytf = [&](double v) {
    return options.log_y ? std::log10(std::max(v, 1e-300)) : v;
  };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& r : table.rows) {
    xmin = std::min(xmin, r[0]);
    xmax = std::max(xmax, r[0]);
    for (std::size_t c = 1; c < r.size(); ++c) {
      ymin = std::min(ymin, ytf(r[c]));
      ymax = std::max(ymax, ytf(r[c]));
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  const auto sy = [&](double y) {
    return top + ph - (ytf(y) - ymin) / (ymax - ymin) * ph;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
     << "\" height=\"" << options.height << "\" font-family=\"sans-serif\" "
     << "font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty())
    os << "<text x=\"" << px(w / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       << "font-size=\"15\">" << escape(options.title) << "</text>\n";
  os << "<rect x=\"" << px(left) << "\" y=\"" << px(top) << "\" width=\""
     << px(pw) << "\" height=\"" << px(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    const double label_y = options.log_y ? std::pow(10.0, fy) : fy;
    os << "<text x=\"" << px(sx(fx)) << "\" y=\"" << px(top + ph + 18)
       << "\" text-anchor=\"middle\">" << fmt(std::round(fx * 1000) / 1000)
       << "</text>\n";
    const double py = top + ph - (fy - ymin) / (ymax - ymin) * ph;
    os << "<text x=\"" << px(left - 6) << "\" y=\"" << px(py + 4)
       << "\" text-anchor=\"end\">"
       << fmt(std::round(label_y * 1000) / 1000) << "</text>\n";
  }
  os << "<text x=\"" << px(left + pw / 2) << "\" y=\"" << px(h - 10)
     << "\" text-anchor=\"middle\">" << escape(table.header[0]) << "</text>\n";

  for (std::size_t c = 1; c < table.header.size(); ++c) {
    const char* color = kColors[(c - 1) % (sizeof kColors / sizeof *kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t r = 0; r < table.rows.size(); ++r)
      os << (r ? " " : "") << px(sx(table.rows[r][0])) << ','
         << px(sy(table.rows[r][c]));
    os << "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(c - 1);
    os << "<text x=\"" << px(left + pw - 8) << "\" y=\"" << px(ly)
       << "\" text-anchor=\"end\" fill=\"" << color << "\">"
       << escape(table.header[c]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace trajlift_cli
