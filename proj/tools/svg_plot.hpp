// Copyright 2026 The trajlift Authors
// SPDX-License-Identifier: Apache-2.0
// Minimal CSV reader and SVG line-chart writer for the `plot` command.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trajlift_cli {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Comma separated, one header line, numeric body. Throws Failure (I/O exit
// code) naming the offending line.
CsvTable read_csv(std::istream& is, const std::string& source);

struct PlotOptions {
  std::string title;
  int width = 640;
  int height = 400;
  bool log_y = false;
};

// Column 0 is x; every other column is one series.
std::string render_svg(const CsvTable& table, const PlotOptions& options);

}  // namespace trajlift_cli
