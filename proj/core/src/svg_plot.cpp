#include "mscale/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mscale/errors.hpp"

namespace mscale {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Series {
  std::string label;
  const char* color;
  bool dashed;
  std::vector<std::pair<double, double>> pts;  // epoch, positive value
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void emit_svg_plot(const std::vector<RunRecord>& records, const std::string& path) {
  if (records.empty()) throw ConfigError("nothing to plot");
  std::vector<Series> series;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const RunRecord& rec = records[r];
    if (rec.rows.empty())
      throw ConfigError("record '" + rec.name + "' has no rows to plot");
    const char* color = kPalette[r % (sizeof kPalette / sizeof *kPalette)];
    bool has_mse = false;
    for (const EpochRow& row : rec.rows)
      if (!std::isnan(row.mse_true)) has_mse = true;
    Series solid{rec.name, color, false, {}};
    for (const EpochRow& row : rec.rows) {
      double v = has_mse ? row.mse_true : row.train_loss;
      if (std::isfinite(v) && v > 0.0)
        solid.pts.emplace_back(static_cast<double>(row.epoch), v);
    }
    if (!solid.pts.empty()) series.push_back(std::move(solid));
    Series dashed{rec.name + " test", color, true, {}};
    for (const EpochRow& row : rec.rows)
      if (std::isfinite(row.test_loss) && row.test_loss > 0.0)
        dashed.pts.emplace_back(static_cast<double>(row.epoch), row.test_loss);
    if (!dashed.pts.empty()) series.push_back(std::move(dashed));
  }
  if (series.empty())
    throw ConfigError("no positive finite values to plot on a log axis");

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) xmax = xmin + 1.0;
  double lmin = std::floor(std::log10(ymin));
  double lmax = std::ceil(std::log10(ymax));
  if (lmax <= lmin) lmax = lmin + 1.0;

  const double W = 960, H = 560, L = 72, R = 24, T = 24, B = 52;
  auto xpix = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto ypix = [&](double y) {
    return T + (lmax - std::log10(y)) / (lmax - lmin) * (H - T - B);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

  // y grid and decade labels
  for (double e = lmin; e <= lmax + 0.5; e += 1.0) {
    double y = ypix(std::pow(10.0, e));
    svg << "<line x1=\"" << fmt(L) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(W - R)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(L - 8) << "\" y=\"" << fmt(y + 4)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">1e"
        << static_cast<long long>(e) << "</text>\n";
  }
  // x ticks
  int nticks = 5;
  for (int i = 0; i <= nticks; ++i) {
    double x = xmin + (xmax - xmin) * i / nticks;
    double px = xpix(x);
    svg << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(H - B) << "\" x2=\"" << fmt(px)
        << "\" y2=\"" << fmt(H - B + 6) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(H - B + 22)
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
        << tick_label(x) << "</text>\n";
  }
  // axes
  svg << "<line x1=\"" << fmt(L) << "\" y1=\"" << fmt(T) << "\" x2=\"" << fmt(L)
      << "\" y2=\"" << fmt(H - B) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "<line x1=\"" << fmt(L) << "\" y1=\"" << fmt(H - B) << "\" x2=\"" << fmt(W - R)
      << "\" y2=\"" << fmt(H - B) << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg << "<text x=\"" << fmt((L + W - R) / 2) << "\" y=\"" << fmt(H - 12)
      << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\">epoch</text>\n";
  svg << "<text x=\"18\" y=\"" << fmt((T + H - B) / 2)
      << "\" font-family=\"monospace\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 "
      << fmt((T + H - B) / 2) << ")\">loss</text>\n";

  for (const Series& s : series) {
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << " points=\"";
    for (auto [x, y] : s.pts) svg << fmt(xpix(x)) << ',' << fmt(ypix(y)) << ' ';
    svg << "\"/>\n";
  }

  // legend
  double lx = W - R - 180, ly = T + 10;
  for (const Series& s : series) {
    svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(lx + 28) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\"";
    if (s.dashed) svg << " stroke-dasharray=\"6 4\"";
    svg << "/>\n";
    svg << "<text x=\"" << fmt(lx + 34) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"monospace\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
    ly += 18;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write svg '" + path + "'");
  out << svg.str();
  if (!out) throw ConfigError("write failure on svg '" + path + "'");
}

}  // namespace mscale
