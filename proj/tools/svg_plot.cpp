#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace stackel::cli {

namespace {

constexpr double kWidth = 720, kHeight = 420, kMargin = 56;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

struct Series {
  std::string label;
  std::vector<double> x, y;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void write_svg(const std::string& path, const std::string& title, const std::string& xlabel, const std::string& ylabel,
               const std::vector<Series>& series, bool equal_aspect) {
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      x0 = std::min(x0, s.x[k]), x1 = std::max(x1, s.x[k]);
      y0 = std::min(y0, s.y[k]), y1 = std::max(y1, s.y[k]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-300) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-300) y0 -= 0.5, y1 += 0.5;
  const double pw = kWidth - 2 * kMargin, ph = kHeight - 2 * kMargin;
  double sx = pw / (x1 - x0), sy = ph / (y1 - y0);
  if (equal_aspect) sx = sy = std::min(sx, sy);
  auto px = [&](double x) { return kMargin + (x - x0) * sx; };
  auto py = [&](double y) { return kHeight - kMargin - (y - y0) * sy; };

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
    out << "<text x=\"" << kMargin + pw * k / 4 << "\" y=\"" << kHeight - kMargin + 16 << "\" text-anchor=\"middle\">"
        << fmt(xv) << "</text>\n";
    out << "<text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin - ph * k / 4 + 4
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"14\" y=\"" << kHeight / 2 << "\" transform=\"rotate(-90 14 " << kHeight / 2
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = kPalette[s % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t k = 0; k < series[s].x.size(); ++k)
      out << fmt(px(series[s].x[k])) << ',' << fmt(py(series[s].y[k])) << ' ';
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin + 4 << "\" y=\"" << kMargin + 14 * (s + 1) << "\" fill=\"" << colour
        << "\">" << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace

int Table::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path);
  Table t;
  std::string line;
  if (!std::getline(in, line) || line.empty()) throw CsvError(path + ": empty file");
  t.header = split(line);
  if (t.column("t") != 0) throw CsvError(path + ": first column must be t");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size())
      throw CsvError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                     " cells, got " + std::to_string(cells.size()));
    std::vector<double> row;
    for (const auto& c : cells) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != c.size()) throw CsvError(path + ":" + std::to_string(lineno) + ": bad number '" + c + "'");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw CsvError(path + ": no data rows");
  return t;
}

std::vector<std::string> plot_trajectory(const Table& t, const std::string& out_dir) {
  std::vector<int> conserved;
  for (std::size_t k = 0; k < t.header.size(); ++k) {
    const std::string& h = t.header[k];
    if (h == "H" || h == "J" || (h.size() > 1 && h[0] == 'F')) conserved.push_back(static_cast<int>(k));
  }
  const int q0 = t.column("q0"), q1 = t.column("q1"), q2 = t.column("q2");
  if (conserved.empty() || q0 < 0 || q1 < 0) throw CsvError("csv lacks q0, q1 or conserved-quantity columns");

  std::vector<Series> drift;
  for (int col : conserved) {
    Series s{t.header[col], {}, {}};
    const double ref = t.rows.front()[col];
    const double scale = std::max(std::abs(ref), 1.0);
    for (const auto& row : t.rows) {
      s.x.push_back(row[0]);
      s.y.push_back(std::log10(std::max(std::abs(row[col] - ref) / scale, 1e-17)));
    }
    drift.push_back(std::move(s));
  }
  std::vector<Series> trace;
  auto projection = [&](int a, int b) {
    Series s{t.header[a] + "-" + t.header[b], {}, {}};
    for (const auto& row : t.rows) s.x.push_back(row[a]), s.y.push_back(row[b]);
    return s;
  };
  trace.push_back(projection(q0, q1));
  if (q2 >= 0) trace.push_back(projection(q0, q2));

  std::filesystem::create_directories(out_dir);
  const std::string drift_path = (std::filesystem::path(out_dir) / "drift.svg").string();
  const std::string trace_path = (std::filesystem::path(out_dir) / "trace.svg").string();
  write_svg(drift_path, "relative drift of conserved quantities", "t", "log10 |dI| / max(|I0|, 1)", drift, false);
  write_svg(trace_path, "trajectory projections", "q0", "q1 / q2", trace, true);
  return {drift_path, trace_path};
}

}  // namespace stackel::cli
