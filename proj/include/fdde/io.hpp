#pragma once

// Minimal deterministic CSV and SVG emitters.

#include <ostream>
#include <string>
#include <vector>

namespace fdde::io {

/// Comma-joined row of shortest round-trip numbers, '\n' terminated.
void write_csv_row(std::ostream& os, const std::vector<double>& values);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool zero_line = false;
};

/// Polylines over a framed axis box with ticks and a legend; viewBox 0 0 800 500.
void write_svg(std::ostream& os, const LinePlot& plot);

struct HeatMap {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  int nx = 1;
  int ny = 1;
  std::vector<int> cells;                 // row-major, cells[j * nx + i], i along x
  std::vector<std::string> class_names;   // legend labels indexed by cell value
};

void write_svg(std::ostream& os, const HeatMap& map);

/// XML text escaping for labels.
[[nodiscard]] std::string escape_xml(const std::string& s);

}  // namespace fdde::io
