#include "tcmesh/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "tcmesh/error.hpp"
#include "tcmesh/util.hpp"

namespace tcmesh {

namespace {

constexpr double kMargin = 56.0;
constexpr int kTickTarget = 5;

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string fmt_tick(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4g", value);
  return buffer;
}

std::string escape_xml(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
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

struct Range {
  double lo = -1.0;
  double hi = 1.0;

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

// Round tick spacing to 1/2/5 * 10^k.
std::vector<double> ticks(const Range& range) {
  const double span = range.hi - range.lo;
  const double raw = span / kTickTarget;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> out;
  double tick = std::ceil(range.lo / step) * step;
  for (; tick <= range.hi + step * 1e-9; tick += step) {
    out.push_back(std::fabs(tick) < step * 1e-9 ? 0.0 : tick);
  }
  return out;
}

}  // namespace

std::string render_svg_scatter(std::span<const std::pair<double, double>> points,
                               const PlotSpec& spec) {
  for (const auto& [x, y] : points) {
    if (!std::isfinite(x) || !std::isfinite(y)) {
      throw Error(ErrorCode::invalid_argument, "non-finite point coordinate");
    }
  }

  Range rx;
  Range ry;
  if (!points.empty()) {
    rx = {points[0].first, points[0].first};
    ry = {points[0].second, points[0].second};
    for (const auto& [x, y] : points) {
      rx.expand(x);
      ry.expand(y);
    }
  }
  // Pad 5% so markers don't sit on the frame; degenerate ranges get a unit
  // box around the value.
  const auto pad = [](Range& r) {
    if (r.hi == r.lo) {
      r.lo -= 1.0;
      r.hi += 1.0;
      return;
    }
    const double p = 0.05 * (r.hi - r.lo);
    r.lo -= p;
    r.hi += p;
  };
  pad(rx);
  pad(ry);

  const double w = spec.width_px;
  const double h = spec.height_px;
  const double plot_w = w - 2 * kMargin;
  const double plot_h = h - 2 * kMargin;
  const auto px = [&](double x) { return kMargin + (x - rx.lo) / (rx.hi - rx.lo) * plot_w; };
  const auto py = [&](double y) { return h - kMargin - (y - ry.lo) / (ry.hi - ry.lo) * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width_px << "\" height=\""
      << spec.height_px << "\" viewBox=\"0 0 " << spec.width_px << ' ' << spec.height_px
      << "\">\n";
  out << "<rect width=\"" << spec.width_px << "\" height=\"" << spec.height_px
      << "\" fill=\"white\"/>\n";
  if (!spec.title.empty()) {
    out << "<text x=\"" << fmt(w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\" "
           "font-family=\"sans-serif\">"
        << escape_xml(spec.title) << "</text>\n";
  }

  // Frame.
  out << "<rect x=\"" << fmt(kMargin) << "\" y=\"" << fmt(kMargin) << "\" width=\""
      << fmt(plot_w) << "\" height=\"" << fmt(plot_h)
      << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // Ticks and labels.
  for (double t : ticks(rx)) {
    const double x = px(t);
    out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(h - kMargin) << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << fmt(h - kMargin + 5) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(h - kMargin + 18)
        << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
        << fmt_tick(t) << "</text>\n";
  }
  for (double t : ticks(ry)) {
    const double y = py(t);
    out << "<line x1=\"" << fmt(kMargin - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kMargin)
        << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(kMargin - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt_tick(t)
        << "</text>\n";
  }

  // Zero axes, when visible.
  if (rx.lo < 0.0 && rx.hi > 0.0) {
    out << "<line x1=\"" << fmt(px(0.0)) << "\" y1=\"" << fmt(kMargin) << "\" x2=\""
        << fmt(px(0.0)) << "\" y2=\"" << fmt(h - kMargin)
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }
  if (ry.lo < 0.0 && ry.hi > 0.0) {
    out << "<line x1=\"" << fmt(kMargin) << "\" y1=\"" << fmt(py(0.0)) << "\" x2=\""
        << fmt(w - kMargin) << "\" y2=\"" << fmt(py(0.0))
        << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  }

  // Slope-1 reference through the origin, clipped to the data box.
  if (spec.reference_line) {
    const double t0 = std::max(rx.lo, ry.lo);
    const double t1 = std::min(rx.hi, ry.hi);
    if (t0 < t1) {
      out << "<line class=\"ref\" x1=\"" << fmt(px(t0)) << "\" y1=\"" << fmt(py(t0))
          << "\" x2=\"" << fmt(px(t1)) << "\" y2=\"" << fmt(py(t1))
          << "\" stroke=\"#d33\" stroke-width=\"1.5\"/>\n";
    }
  }

  for (const auto& [x, y] : points) {
    out << "<circle class=\"pt\" cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
        << "\" r=\"2.5\" fill=\"#225b9b\" fill-opacity=\"0.65\"/>\n";
  }

  // Axis labels.
  out << "<text x=\"" << fmt(w / 2) << "\" y=\"" << fmt(h - 12)
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">"
      << escape_xml(spec.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(h / 2)
      << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
         "transform=\"rotate(-90 16 "
      << fmt(h / 2) << ")\">" << escape_xml(spec.y_label) << "</text>\n";
  out << "</svg>\n";
  return std::move(out).str();
}

void emit_svg_scatter(std::span<const std::pair<double, double>> points, const PlotSpec& spec,
                      const std::filesystem::path& path) {
  write_file(path, render_svg_scatter(points, spec));
}

}  // namespace tcmesh
