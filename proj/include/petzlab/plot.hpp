#pragma once

// Static SVG scatter plots of recovery error against the entropy drop, over
// the region allowed by the corresponding bound.
//
//   q: x = delta_q2, boundary y = sqrt(x)
//   d: x = delta_d2, boundary y = sqrt(d (1 - exp(-x)))

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "petzlab/experiment.hpp"

namespace petzlab {

enum class BoundKind { q, d };

inline BoundKind parse_bound_kind(const std::string& s) {
  if (s == "q") return BoundKind::q;
  if (s == "d") return BoundKind::d;
  throw Error("bound must be 'q' or 'd', got '" + s + "'");
}

/// One parsed CSV row; optional fields are absent when the cell is empty.
struct CsvRecord {
  std::uint64_t sample_index = 0;
  Index dim = 0;
  std::vector<std::optional<double>> values;  // lhs_trace_norm .. ratio_d
  std::string status;

  std::optional<double> get(const std::string& column) const {
    const auto& cols = csv_columns();
    const auto it = std::find(cols.begin() + 2, cols.end() - 1, column);
    if (it == cols.end() - 1) throw Error("unknown numeric column " + column);
    return values[static_cast<std::size_t>(it - cols.begin() - 2)];
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw MalformedCsv(where + ": trailing characters in '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw MalformedCsv(where + ": not a number '" + s + "'");
  }
}

}  // namespace detail

inline std::vector<CsvRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw MalformedCsv(path.string() + ": missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header()) throw MalformedCsv(path.string() + ": unexpected header");

  std::vector<CsvRecord> out;
  std::size_t lineno = 1;
  const std::size_t ncols = csv_columns().size();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != ncols) {
      throw MalformedCsv(where + ": expected " + std::to_string(ncols) + " fields, got " +
                         std::to_string(cells.size()));
    }
    CsvRecord r;
    r.sample_index = static_cast<std::uint64_t>(detail::parse_number(cells[0], where));
    r.dim = static_cast<Index>(detail::parse_number(cells[1], where));
    for (std::size_t c = 2; c + 1 < ncols; ++c) {
      if (cells[c].empty()) {
        r.values.emplace_back();
      } else {
        r.values.emplace_back(detail::parse_number(cells[c], where));
      }
    }
    r.status = cells.back();
    out.push_back(std::move(r));
  }
  return out;
}

inline double bound_curve(BoundKind kind, Index dim, double x) {
  if (kind == BoundKind::q) return std::sqrt(std::max(x, 0.0));
  return std::sqrt(static_cast<double>(dim) * -std::expm1(-std::max(x, 0.0)));
}

struct PlotOptions {
  double width = 640.0;
  double height = 480.0;
  double margin = 60.0;
  int curve_points = 400;
  std::optional<Index> dim;  // used for the D-bound curve when the CSV is empty
};

/// Renders the SVG text. The root element carries the data ranges
/// (data-x-max, data-y-max) and plot box so markers can be mapped back.
inline std::string render_plot_svg(const std::vector<CsvRecord>& rows, BoundKind kind,
                                   const PlotOptions& opt = {}) {
  const std::string xcol = kind == BoundKind::q ? "delta_q2" : "delta_d2";
  Index dim = opt.dim.value_or(2);
  struct Pt { double x, y; };
  std::vector<Pt> pts;
  for (const auto& r : rows) {
    const auto x = r.get(xcol);
    const auto y = r.get("lhs_trace_norm");
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) continue;
    pts.push_back({*x, *y});
    dim = r.dim;
  }

  double xmax = 0.0, ymax = 0.0;
  for (const auto& p : pts) {
    xmax = std::max(xmax, p.x);
    ymax = std::max(ymax, p.y);
  }
  if (xmax <= 0.0) xmax = kind == BoundKind::q ? 1.0 : 3.0;
  xmax *= 1.05;
  ymax = std::max(ymax, bound_curve(kind, dim, xmax)) * 1.05;
  if (ymax <= 0.0) ymax = 1.0;

  const double left = opt.margin, top = opt.margin / 2.0;
  const double pw = opt.width - 1.5 * opt.margin, ph = opt.height - 1.5 * opt.margin;
  auto px = [&](double x) { return left + pw * x / xmax; };
  auto py = [&](double y) { return top + ph * (1.0 - y / ymax); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
     << opt.height << "\" data-bound=\"" << (kind == BoundKind::q ? "q" : "d") << "\" data-dim=\""
     << dim << "\" data-x-max=\"" << detail::fmt_double(xmax) << "\" data-y-max=\""
     << detail::fmt_double(ymax) << "\" data-plot-left=\"" << left << "\" data-plot-top=\"" << top
     << "\" data-plot-width=\"" << pw << "\" data-plot-height=\"" << ph << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" fill=\"white\"/>\n";

  std::ostringstream curve;
  for (int i = 0; i <= opt.curve_points; ++i) {
    const double x = xmax * i / opt.curve_points;
    curve << num(px(x)) << ',' << num(py(bound_curve(kind, dim, x))) << ' ';
  }
  os << "<polygon class=\"allowed-region\" fill=\"#dde8f5\" stroke=\"none\" points=\""
     << curve.str() << num(px(xmax)) << ',' << num(py(0)) << ' ' << num(px(0)) << ','
     << num(py(0)) << "\"/>\n";
  os << "<polyline class=\"bound-curve\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\" points=\""
     << curve.str() << "\"/>\n";

  os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = xmax * t / 4.0, yv = ymax * t / 4.0;
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(top + ph + 16)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
    os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(yv) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv) << "</text>\n";
  }
  os << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(opt.height - 8)
     << "\" font-size=\"13\" text-anchor=\"middle\">"
     << (kind == BoundKind::q ? "&#916;Q&#771;&#8322; (&#963; = I/d)" : "&#916;D&#771;&#8322; (&#963; = I/d)")
     << "</text>\n";
  os << "<text x=\"14\" y=\"" << num(top + ph / 2) << "\" font-size=\"13\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 14 " << num(top + ph / 2) << ")\">||&#961; - R&#8728;&#923;(&#961;)||&#8321;</text>\n";

  os << "<g class=\"markers\" fill=\"#c0392b\" fill-opacity=\"0.5\">\n";
  for (const auto& p : pts) {
    os << "<circle class=\"marker\" cx=\"" << num(px(p.x)) << "\" cy=\"" << num(py(p.y))
       << "\" r=\"1.2\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

inline void emit_plot(const std::filesystem::path& csv_path, BoundKind kind,
                      const std::filesystem::path& svg_path, const PlotOptions& opt = {}) {
  const auto rows = read_csv(csv_path);
  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + svg_path.string());
  out << render_plot_svg(rows, kind, opt);
  if (!out) throw IoError("write failed for " + svg_path.string());
}

}  // namespace petzlab
