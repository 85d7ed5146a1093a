#pragma once

// Dependency-free SVG 1.1 emitters for reliability diagrams, probability
// histograms and the per-sample ECD curve. Output is a pure function of the
// input: numbers are printed with fixed precision, nothing depends on time
// or locale. Data-carrying elements expose their values as data-*
// attributes so they can be checked without rasterising.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ecd/binning.hpp"
#include "ecd/error.hpp"
#include "ecd/metrics.hpp"

namespace ecd {

namespace svg {

inline std::string num(double v, int decimals = 2) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string escape(const std::string& text) {
  std::string out;
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

/// Maps data coordinates onto a fixed plot rectangle.
struct Frame {
  double width = 480, height = 480;
  double left = 64, right = 24, top = 44, bottom = 56;
  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;

  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
  double px(double x) const { return left + (x - x_min) / (x_max - x_min) * plot_w(); }
  double py(double y) const { return top + (y_max - y) / (y_max - y_min) * plot_h(); }
};

inline std::string open(const Frame& f, const std::string& title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(f.width, 0) +
       "\" height=\"" + num(f.height, 0) + "\" viewBox=\"0 0 " + num(f.width, 0) + " " +
       num(f.height, 0) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(f.width, 0) + "\" height=\"" + num(f.height, 0) +
       "\" fill=\"white\"/>\n";
  if (!title.empty()) {
    s += "<text x=\"" + num(f.width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  }
  return s;
}

inline std::string line(double x1, double y1, double x2, double y2, const std::string& style) {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" +
         num(y2) + "\" " + style + "/>\n";
}

inline std::string text(double x, double y, const std::string& body, const std::string& anchor) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\">" +
         escape(body) + "</text>\n";
}

/// Axis box, ticks and axis titles.
inline std::string axes(const Frame& f, std::span<const double> x_ticks,
                        std::span<const double> y_ticks, const std::string& x_title,
                        const std::string& y_title, int tick_decimals = 1) {
  std::string s = "<rect x=\"" + num(f.left) + "\" y=\"" + num(f.top) + "\" width=\"" +
                  num(f.plot_w()) + "\" height=\"" + num(f.plot_h()) +
                  "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : x_ticks) {
    s += line(f.px(t), f.top + f.plot_h(), f.px(t), f.top + f.plot_h() + 5, "stroke=\"black\"");
    s += text(f.px(t), f.top + f.plot_h() + 18, num(t, tick_decimals), "middle");
  }
  for (double t : y_ticks) {
    s += line(f.left - 5, f.py(t), f.left, f.py(t), "stroke=\"black\"");
    s += text(f.left - 8, f.py(t) + 4, num(t, tick_decimals), "end");
  }
  s += text(f.left + f.plot_w() / 2, f.height - 14, x_title, "middle");
  s += "<text x=\"16\" y=\"" + num(f.top + f.plot_h() / 2) +
       "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(f.top + f.plot_h() / 2) +
       ")\">" + escape(y_title) + "</text>\n";
  return s;
}

inline std::vector<double> unit_ticks() { return {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}; }

}  // namespace svg

struct ReliabilityOptions {
  std::string title = "Reliability diagram";
  bool label_bins = true;
  double marker_radius = 5.0;
};

/// Fraction of positives against mean confidence with the identity line.
/// Markers above the line are under-confident, below it over-confident.
inline std::string render_reliability_svg(std::span<const ReliabilityPoint> points,
                                          const ReliabilityOptions& options = {}) {
  const svg::Frame f;
  const auto ticks = svg::unit_ticks();
  std::string s = svg::open(f, options.title);
  s += svg::axes(f, ticks, ticks, "Mean predicted probability", "Fraction of positives");
  s += svg::line(f.px(0), f.py(0), f.px(1), f.py(1),
                 "stroke=\"#1f4fbf\" stroke-width=\"1.5\" class=\"identity\"");
  for (const ReliabilityPoint& p : points) {
    s += "<circle class=\"bin\" data-bin=\"" + std::to_string(p.bin + 1) + "\" data-conf=\"" +
         svg::num(p.conf, 6) + "\" data-frac=\"" + svg::num(p.frac_pos, 6) + "\" data-count=\"" +
         std::to_string(p.count) + "\" cx=\"" + svg::num(f.px(p.conf)) + "\" cy=\"" +
         svg::num(f.py(p.frac_pos)) + "\" r=\"" + svg::num(options.marker_radius) +
         "\" fill=\"#d62728\"/>\n";
    if (options.label_bins) {
      s += svg::text(f.px(p.conf) + options.marker_radius + 2, f.py(p.frac_pos) - 4,
                     std::to_string(p.bin + 1), "start");
    }
  }
  s += "</svg>\n";
  return s;
}

/// Counts of probabilities per equal-width bin (same edges as BinSpec).
inline std::vector<std::size_t> histogram_counts(const Dataset& data, std::size_t bins) {
  const BinSpec spec(bins);
  detail::require_non_empty(data.size());
  std::vector<std::size_t> counts(bins, 0);
  for (const PredictionRecord& r : data) ++counts[assign_bin(r.prob(), spec)];
  return counts;
}

inline std::string render_histogram_svg(const Dataset& data, std::size_t bins,
                                        const std::string& title = "Predicted probabilities") {
  const auto counts = histogram_counts(data, bins);
  const std::size_t tallest = *std::max_element(counts.begin(), counts.end());
  svg::Frame f;
  f.y_max = static_cast<double>(tallest);
  const std::vector<double> x_ticks = svg::unit_ticks();
  std::vector<double> y_ticks;
  for (int i = 0; i <= 4; ++i) y_ticks.push_back(f.y_max * i / 4.0);
  std::string s = svg::open(f, title);
  s += svg::axes(f, x_ticks, {}, "Predicted probability", "Count");
  for (double t : y_ticks) {
    s += svg::line(f.left - 5, f.py(t), f.left, f.py(t), "stroke=\"black\"");
    s += svg::text(f.left - 8, f.py(t) + 4, svg::num(t, 0), "end");
  }
  const BinSpec spec(bins);
  for (std::size_t m = 0; m < bins; ++m) {
    const double x0 = f.px(spec.lower_edge(m));
    const double x1 = f.px(spec.upper_edge(m));
    const double y = f.py(static_cast<double>(counts[m]));
    s += "<rect class=\"bar\" data-bin=\"" + std::to_string(m + 1) + "\" data-count=\"" +
         std::to_string(counts[m]) + "\" x=\"" + svg::num(x0) + "\" y=\"" + svg::num(y) +
         "\" width=\"" + svg::num(x1 - x0) + "\" height=\"" + svg::num(f.py(0) - y) +
         "\" fill=\"#4c72b0\" stroke=\"white\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

struct CurveMinimum {
  double prob;
  double score;
  int label;
};

/// Lowest score over both label branches of an ECD curve.
inline CurveMinimum curve_minimum(std::span<const CurvePoint> curve) {
  if (curve.empty()) throw DataError("empty curve");
  CurveMinimum best{0.0, std::numeric_limits<double>::infinity(), 0};
  for (const CurvePoint& c : curve) {
    if (c.score_label0 < best.score) best = {c.prob, c.score_label0, 0};
    if (c.score_label1 < best.score) best = {c.prob, c.score_label1, 1};
  }
  return best;
}

/// Per-sample ECD against probability for both labels, with the zero line
/// and the curve minimum annotated.
inline std::string render_ecd_curve_svg(std::span<const CurvePoint> curve) {
  const CurveMinimum minimum = curve_minimum(curve);
  double top = 0.0;
  for (const CurvePoint& c : curve) top = std::max({top, c.score_label0, c.score_label1});
  svg::Frame f;
  f.width = 560;
  f.y_min = std::min(minimum.score, 0.0) - 0.5;
  f.y_max = top + 0.5;

  std::vector<double> y_ticks;
  for (double t = std::ceil(f.y_min); t <= f.y_max; t += 1.0) y_ticks.push_back(t);
  std::string s = svg::open(f, "Per-sample ECD score");
  s += svg::axes(f, svg::unit_ticks(), y_ticks, "Predicted probability of class 1", "ECD score");
  s += svg::line(f.px(0), f.py(0), f.px(1), f.py(0),
                 "stroke=\"gray\" stroke-dasharray=\"4 3\" class=\"zero\"");

  auto polyline = [&](int label, const char* colour) {
    std::string pts;
    for (const CurvePoint& c : curve) {
      const double y = label == 0 ? c.score_label0 : c.score_label1;
      if (!pts.empty()) pts += ' ';
      pts += svg::num(f.px(c.prob)) + "," + svg::num(f.py(y));
    }
    return "<polyline class=\"curve\" data-label=\"" + std::to_string(label) +
           "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\" points=\"" + pts +
           "\"/>\n";
  };
  s += polyline(0, "#1f77b4");
  s += polyline(1, "#d62728");

  const double mx = f.px(minimum.prob), my = f.py(minimum.score);
  s += "<circle class=\"minimum\" data-prob=\"" + svg::num(minimum.prob, 6) + "\" data-score=\"" +
       svg::num(minimum.score, 6) + "\" data-label=\"" + std::to_string(minimum.label) +
       "\" cx=\"" + svg::num(mx) + "\" cy=\"" + svg::num(my) + "\" r=\"3\" fill=\"black\"/>\n";
  s += svg::text(mx, my + 18, "min " + svg::num(minimum.score, 4) + " at p = " +
                                  svg::num(minimum.prob, 4),
                 "middle");
  // Each branch is steep where the prediction contradicts its label.
  s += svg::text(f.px(0.02), f.top + 16, "label 1", "start");
  s += svg::text(f.px(0.98), f.top + 16, "label 0", "end");
  s += "</svg>\n";
  return s;
}

}  // namespace ecd
