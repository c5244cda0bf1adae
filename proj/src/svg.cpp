#include "gradolab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "gradolab/csv.hpp"

namespace gradolab {

namespace {

std::optional<double> column_value(const SweepTable& table, const SweepRow& row,
                                   const SweepCellResult& cell, const std::string& name) {
  if (name == "param" || name == table.param_name) return row.param;
  if (name == "cell") return static_cast<double>(cell.cell + 1);
  if (name == "delta") {
    if (row.ok_ode && row.ok_rtm) return cell.delta;
    return std::nullopt;
  }
  if (name == "S_ode") return row.ok_ode ? std::optional<double>(cell.s_ode) : std::nullopt;
  if (name == "S_rtm") return row.ok_rtm ? std::optional<double>(cell.s_rtm) : std::nullopt;
  for (size_t j = 0; j < table.species_names.size(); ++j) {
    if (name == "B_" + table.species_names[j] + "_ode")
      return row.ok_ode ? std::optional<double>(cell.b_ode[static_cast<Eigen::Index>(j)])
                        : std::nullopt;
    if (name == "B_" + table.species_names[j] + "_rtm")
      return row.ok_rtm ? std::optional<double>(cell.b_rtm[static_cast<Eigen::Index>(j)])
                        : std::nullopt;
  }
  throw std::invalid_argument("render_plot: unknown column \"" + name + "\"");
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  bool log = false;

  double map(double v, double px_lo, double px_hi) const {
    const double a = log ? std::log10(lo) : lo;
    const double b = log ? std::log10(hi) : hi;
    const double x = log ? std::log10(v) : v;
    const double t = (b > a) ? (x - a) / (b - a) : 0.5;
    return px_lo + t * (px_hi - px_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int k0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int k1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      for (int k = k0; k <= k1; ++k) out.push_back(std::pow(10.0, k));
      if (out.size() < 2) {
        out = {lo, hi};
      }
      return out;
    }
    const double range = hi - lo;
    if (range <= 0.0) return {lo};
    double step = std::pow(10.0, std::floor(std::log10(range / 5.0)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
      if (range / (step * mult) <= 7.0) {
        step *= mult;
        break;
      }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 0.5 * step; v += step) {
      double r = v;
      if (std::abs(r) < 1e-12 * range) r = 0.0;
      out.push_back(r);
    }
    return out;
  }
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string render_plot(const SweepTable& table, const PlotSpec& spec) {
  if (spec.y_columns.empty()) throw std::invalid_argument("render_plot: no y columns");

  std::set<int> cells;
  for (const auto& row : table.rows)
    for (const auto& c : row.cells) cells.insert(c.cell);

  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  for (const auto& ycol : spec.y_columns) {
    for (int cell : cells) {
      Series s;
      s.name = ycol + (cells.size() > 1 ? " [cell " + std::to_string(cell + 1) + "]" : "");
      for (const auto& row : table.rows) {
        for (const auto& cr : row.cells) {
          if (cr.cell != cell) continue;
          const auto x = column_value(table, row, cr, spec.x_column);
          const auto y = column_value(table, row, cr, ycol);
          if (!x || !y) continue;
          if (spec.log_x && !(*x > 0.0)) continue;
          if (spec.log_y && !(*y > 0.0)) continue;
          s.pts.emplace_back(*x, *y);
        }
      }
      if (!s.pts.empty()) series.push_back(std::move(s));
    }
  }
  size_t total = 0;
  for (const auto& s : series) total += s.pts.size();
  if (total == 0) throw std::invalid_argument("render_plot: no data rows");

  Axis ax, ay;
  ax.log = spec.log_x;
  ay.log = spec.log_y;
  bool first = true;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      if (first) {
        ax.lo = ax.hi = x;
        ay.lo = ay.hi = y;
        first = false;
      }
      ax.lo = std::min(ax.lo, x);
      ax.hi = std::max(ax.hi, x);
      ay.lo = std::min(ay.lo, y);
      ay.hi = std::max(ay.hi, y);
    }
  if (!ay.log) {
    const double pad = (ay.hi - ay.lo) * 0.05;
    if (pad > 0.0) {
      ay.lo -= pad;
      ay.hi += pad;
    } else {
      ay.lo -= 0.5;
      ay.hi += 0.5;
    }
  }
  if (ax.hi == ax.lo) {
    ax.lo -= 0.5;
    ax.hi += 0.5;
  }
  if (ay.log && ay.hi == ay.lo) {
    ay.lo *= 0.5;
    ay.hi *= 2.0;
  }

  const double w = 800, h = 560;
  const double ml = 80, mr = 20, mt = 40, mb = 55;
  auto px = [&](double v) { return ax.map(v, ml, w - mr); };
  auto py = [&](double v) { return ay.map(v, h - mb, mt); };
  auto coord = [](double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  if (!spec.title.empty())
    svg << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"16\">" << spec.title << "</text>\n";

  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    svg << "<line x1=\"" << coord(x) << "\" y1=\"" << h - mb << "\" x2=\"" << coord(x)
        << "\" y2=\"" << h - mb + 5 << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(x) << "\" y=\"" << h - mb + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format_double(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << coord(y) << "\" x2=\"" << ml << "\" y2=\""
        << coord(y) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << ml - 8 << "\" y=\"" << coord(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(t)
        << "</text>\n";
  }
  svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_column
      << "</text>\n";

  for (size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].pts) svg << coord(px(x)) << "," << coord(py(y)) << " ";
    svg << "\"/>\n";
    // legend
    const double ly = mt + 16.0 * static_cast<double>(i);
    svg << "<line x1=\"" << w - mr - 150 << "\" y1=\"" << coord(ly) << "\" x2=\"" << w - mr - 130
        << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << w - mr - 125 << "\" y=\"" << coord(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[i].name << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gradolab
