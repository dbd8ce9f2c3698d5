#include "morpho/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace morpho {

std::optional<Axis> parse_axis(std::string_view name) {
  if (name == "alpha") return Axis::Alpha;
  if (name == "lambda") return Axis::Lambda;
  if (name == "size") return Axis::Size;
  return std::nullopt;
}

std::string_view axis_label(Axis axis) {
  switch (axis) {
    case Axis::Alpha: return "thrust-to-weight ratio alpha [-]";
    case Axis::Lambda: return "maneuverability lambda [(rad/s^2)^2]";
    case Axis::Size: return "size [m^2]";
  }
  return "";
}

double axis_value(const ObjectiveVector& o, Axis axis) {
  switch (axis) {
    case Axis::Alpha: return o.alpha;
    case Axis::Lambda: return o.lambda;
    case Axis::Size: return o.size;
  }
  return 0.0;
}

namespace {

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, a);
  return buf;
}

struct Range {
  double lo, hi;
  double map(double v, double out_lo, double out_hi) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

Range padded_range(std::vector<double> values) {
  if (values.empty()) return {0.0, 1.0};
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = *mn, hi = *mx;
  const double pad = hi > lo ? 0.05 * (hi - lo) : std::max(1e-12, 0.05 * std::abs(lo) + 1e-12);
  return {lo - pad, hi + pad};
}

}  // namespace

std::string scatter_svg(const std::vector<ScatterPoint>& points, Axis x, Axis y,
                        const std::optional<ObjectiveVector>& baseline) {
  constexpr double width = 640, height = 480;
  constexpr double left = 80, right = 120, top = 30, bottom = 60;
  constexpr std::array<const char*, 5> colors{"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                              "#66a61e"};

  std::vector<double> xs, ys;
  for (const auto& p : points) {
    xs.push_back(axis_value(p.objectives, x));
    ys.push_back(axis_value(p.objectives, y));
  }
  if (baseline) {
    xs.push_back(axis_value(*baseline, x));
    ys.push_back(axis_value(*baseline, y));
  }
  const Range rx = padded_range(xs);
  const Range ry = padded_range(ys);
  auto px = [&](double v) { return rx.map(v, left, width - right); };
  auto py = [&](double v) { return ry.map(v, height - bottom, top); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  svg += "<rect x=\"80\" y=\"30\" width=\"440\" height=\"390\" fill=\"none\" stroke=\"black\"/>\n";

  for (int t = 0; t <= 4; ++t) {
    const double fx = rx.lo + (rx.hi - rx.lo) * t / 4.0;
    const double fy = ry.lo + (ry.hi - ry.lo) * t / 4.0;
    svg += "<text x=\"" + fmt("%.1f", px(fx)) + "\" y=\"438\" text-anchor=\"middle\">" +
           fmt("%.4g", fx) + "</text>\n";
    svg += "<text x=\"74\" y=\"" + fmt("%.1f", py(fy) + 4) + "\" text-anchor=\"end\">" +
           fmt("%.4g", fy) + "</text>\n";
  }
  svg += "<text x=\"300\" y=\"470\" text-anchor=\"middle\">" + std::string(axis_label(x)) +
         "</text>\n";
  svg += "<text x=\"16\" y=\"225\" text-anchor=\"middle\" transform=\"rotate(-90 16 225)\">" +
         std::string(axis_label(y)) + "</text>\n";

  for (std::size_t i = 0; i < points.size(); ++i) {
    const int k = std::clamp(points[i].n_props - kMinPropellers, 0, 4);
    svg += "<circle cx=\"" + fmt("%.2f", px(xs[i])) + "\" cy=\"" + fmt("%.2f", py(ys[i])) +
           "\" r=\"3.5\" fill=\"" + colors[k] + "\" fill-opacity=\"0.8\"/>\n";
  }
  if (baseline) {
    const double cx = px(axis_value(*baseline, x));
    const double cy = py(axis_value(*baseline, y));
    svg += "<path d=\"M" + fmt("%.2f", cx - 6) + " " + fmt("%.2f", cy - 6) + " L" +
           fmt("%.2f", cx + 6) + " " + fmt("%.2f", cy + 6) + " M" + fmt("%.2f", cx - 6) + " " +
           fmt("%.2f", cy + 6) + " L" + fmt("%.2f", cx + 6) + " " + fmt("%.2f", cy - 6) +
           "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  }

  for (int k = 0; k < 5; ++k) {
    const double ly = 45 + 18 * k;
    svg += "<circle cx=\"540\" cy=\"" + fmt("%.0f", ly) + "\" r=\"4\" fill=\"" + colors[k] + "\"/>";
    svg += "<text x=\"550\" y=\"" + fmt("%.0f", ly + 4) + "\">" + std::to_string(k + 4) +
           " props</text>\n";
  }
  if (baseline) {
    svg += "<text x=\"536\" y=\"149\" font-weight=\"bold\">&#215;</text>"
           "<text x=\"550\" y=\"149\">baseline quad</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace morpho
