#include "fdde/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fdde/format.hpp"

namespace fdde::io {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// 1-2-5 tick spacing giving about five intervals.
double nice_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

struct Frame {
  double x_lo, x_hi, y_lo, y_hi;
  [[nodiscard]] double px(double x) const { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); }
  [[nodiscard]] double py(double y) const {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

void header(std::ostream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" width=\""
     << kWidth << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(title)
     << "</text>\n";
}

void axes(std::ostream& os, const Frame& f, const std::string& x_label, const std::string& y_label) {
  os << "<rect x=\"" << fixed(f.px(f.x_lo)) << "\" y=\"" << fixed(f.py(f.y_hi)) << "\" width=\""
     << fixed(f.px(f.x_hi) - f.px(f.x_lo)) << "\" height=\"" << fixed(f.py(f.y_lo) - f.py(f.y_hi))
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<g class=\"ticks\">\n";
  const double xs = nice_step(f.x_hi - f.x_lo);
  for (double v = std::ceil(f.x_lo / xs) * xs; v <= f.x_hi + 1e-9 * xs; v += xs) {
    const double x = f.px(v);
    os << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(f.py(f.y_lo)) << "\" x2=\"" << fixed(x) << "\" y2=\""
       << fixed(f.py(f.y_lo) + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(f.py(f.y_lo) + 18) << "\" text-anchor=\"middle\">"
       << tick_label(v) << "</text>\n";
  }
  const double ys = nice_step(f.y_hi - f.y_lo);
  for (double v = std::ceil(f.y_lo / ys) * ys; v <= f.y_hi + 1e-9 * ys; v += ys) {
    const double y = f.py(v);
    os << "<line x1=\"" << fixed(f.px(f.x_lo) - 5) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(f.px(f.x_lo))
       << "\" y2=\"" << fixed(y) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fixed(f.px(f.x_lo) - 8) << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">"
       << tick_label(v) << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << fixed((f.px(f.x_lo) + f.px(f.x_hi)) / 2) << "\" y=\"" << kHeight - 15
     << "\" text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  os << "<text x=\"20\" y=\"" << fixed((f.py(f.y_lo) + f.py(f.y_hi)) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
     << fixed((f.py(f.y_lo) + f.py(f.y_hi)) / 2) << ")\">" << escape_xml(y_label) << "</text>\n";
}

}  // namespace

void write_csv_row(std::ostream& os, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    os << format_number(values[i]);
  }
  os << '\n';
}

std::string escape_xml(const std::string& s) {
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

void write_svg(std::ostream& os, const LinePlot& plot) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : plot.series) {
    for (double v : s.x) {
      x_lo = std::min(x_lo, v);
      x_hi = std::max(x_hi, v);
    }
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (plot.zero_line) {
    y_lo = std::min(y_lo, 0.0);
    y_hi = std::max(y_hi, 0.0);
  }
  if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
  if (!std::isfinite(y_lo)) y_lo = 0.0, y_hi = 1.0;
  if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  if (y_hi <= y_lo) y_hi = y_lo + 1.0;
  const double pad = 0.05 * (y_hi - y_lo);
  const Frame f{x_lo, x_hi, y_lo - pad, y_hi + pad};

  header(os, plot.title);
  axes(os, f, plot.x_label, plot.y_label);
  if (plot.zero_line) {
    os << "<line class=\"zero\" x1=\"" << fixed(f.px(x_lo)) << "\" y1=\"" << fixed(f.py(0.0)) << "\" x2=\""
       << fixed(f.px(x_hi)) << "\" y2=\"" << fixed(f.py(0.0)) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  }
  for (std::size_t i = 0; i < plot.series.size(); ++i) {
    const auto& s = plot.series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(s.y[k])) continue;
      if (k) os << ' ';
      os << fixed(f.px(s.x[k])) << ',' << fixed(f.py(s.y[k]));
    }
    os << "\"/>\n";
    const double ly = kTop + 20.0 * static_cast<double>(i) + 10.0;
    const double lx = kWidth - kRight + 15.0;
    os << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 20) << "\" y2=\""
       << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fixed(lx + 26) << "\" y=\"" << fixed(ly + 4) << "\">" << escape_xml(s.label) << "</text>\n";
  }
  os << "</svg>\n";
}

void write_svg(std::ostream& os, const HeatMap& map) {
  const Frame f{map.x_lo, map.x_hi, map.y_lo, map.y_hi};
  header(os, map.title);
  const char* const fills[] = {"#4daf4a", "#e41a1c", "#bdbdbd", "#377eb8", "#ff7f00"};
  const double cw = (f.px(map.x_hi) - f.px(map.x_lo)) / map.nx;
  const double ch = (f.py(map.y_lo) - f.py(map.y_hi)) / map.ny;
  os << "<g class=\"cells\">\n";
  for (int j = 0; j < map.ny; ++j) {
    for (int i = 0; i < map.nx; ++i) {
      const int c = map.cells[static_cast<std::size_t>(j) * map.nx + i];
      os << "<rect x=\"" << fixed(f.px(map.x_lo) + i * cw) << "\" y=\"" << fixed(f.py(map.y_lo) - (j + 1) * ch)
         << "\" width=\"" << fixed(cw) << "\" height=\"" << fixed(ch) << "\" fill=\"" << fills[c % 5] << "\"/>\n";
    }
  }
  os << "</g>\n";
  axes(os, f, map.x_label, map.y_label);
  for (std::size_t c = 0; c < map.class_names.size(); ++c) {
    const double ly = kTop + 22.0 * static_cast<double>(c) + 4.0;
    const double lx = kWidth - kRight + 15.0;
    os << "<rect x=\"" << fixed(lx) << "\" y=\"" << fixed(ly) << "\" width=\"14\" height=\"14\" fill=\""
       << fills[c % 5] << "\"/>\n";
    os << "<text x=\"" << fixed(lx + 20) << "\" y=\"" << fixed(ly + 11) << "\">" << escape_xml(map.class_names[c])
       << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace fdde::io
