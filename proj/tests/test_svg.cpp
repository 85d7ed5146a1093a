#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "ecd/simulation.hpp"
#include "ecd/svg.hpp"

namespace {

using Attrs = std::map<std::string, std::string>;

std::vector<Attrs> elements(const std::string& svg, const std::string& tag, const std::string& cls) {
  std::vector<Attrs> out;
  const std::regex elem("<" + tag + " class=\"" + cls + "\"([^>]*)/>");
  const std::regex attr(R"(([\w-]+)="([^"]*)\")");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), elem); it != std::sregex_iterator();
       ++it) {
    Attrs a;
    const std::string body = (*it)[1];
    for (auto jt = std::sregex_iterator(body.begin(), body.end(), attr);
         jt != std::sregex_iterator(); ++jt) {
      a[(*jt)[1]] = (*jt)[2];
    }
    out.push_back(a);
  }
  return out;
}

double num(const Attrs& a, const std::string& key) { return std::stod(a.at(key)); }

ecd::Dataset simulated(double sigma, std::uint64_t seed) {
  ecd::SimulationConfig cfg;
  cfg.noise_sigma = sigma;
  cfg.seed = seed;
  return ecd::simulate(cfg).dataset();
}

std::string reliability_svg(const ecd::Dataset& data) {
  const auto report = ecd::build_report(data);
  const auto points = ecd::reliability_points(report.bins);
  return ecd::render_reliability_svg(points);
}

TEST(ReliabilitySvg, Deterministic) {
  const auto data = simulated(2.0, 3);
  EXPECT_EQ(reliability_svg(data), reliability_svg(data));
  EXPECT_EQ(ecd::render_histogram_svg(data, 10), ecd::render_histogram_svg(data, 10));
}

TEST(ReliabilitySvg, CalibratedMarkersSitOnDiagonal) {
  ecd::SimulationConfig cfg;
  cfg.n = 400000;
  cfg.seed = 11;
  const std::string svg = reliability_svg(ecd::simulate(cfg).dataset());
  const ecd::svg::Frame f;
  const auto bins = elements(svg, "circle", "bin");
  ASSERT_EQ(bins.size(), 10u);
  for (const Attrs& b : bins) {
    const double diag_y = f.py(num(b, "data-conf"));
    // The sparsest bin still holds several thousand labels here.
    EXPECT_LE(std::abs(num(b, "cy") - diag_y), 2 * num(b, "r")) << b.at("data-bin");
    EXPECT_NEAR(num(b, "cx"), f.px(num(b, "data-conf")), 0.01);
  }
  EXPECT_EQ(elements(svg, "line", "identity").size(), 0u);
  EXPECT_NE(svg.find("class=\"identity\""), std::string::npos);
}

TEST(ReliabilitySvg, UnderConfidentMarkersAboveDiagonal) {
  ecd::Dataset d;
  for (int i = 0; i < 10; ++i) d.add(0.35, i < 8 ? 1 : 0);
  for (int i = 0; i < 10; ++i) d.add(0.85, i < 3 ? 1 : 0);
  const std::string svg = reliability_svg(d);
  const ecd::svg::Frame f;
  const auto bins = elements(svg, "circle", "bin");
  ASSERT_EQ(bins.size(), 2u);
  EXPECT_EQ(bins[0].at("data-bin"), "4");
  EXPECT_LT(num(bins[0], "cy"), f.py(0.35));
  EXPECT_EQ(bins[1].at("data-bin"), "9");
  EXPECT_GT(num(bins[1], "cy"), f.py(0.85));
  EXPECT_EQ(bins[1].at("data-count"), "10");
}

TEST(ReliabilitySvg, NoPointsStillDrawsAxes) {
  const std::string svg = ecd::render_reliability_svg({});
  EXPECT_TRUE(elements(svg, "circle", "bin").empty());
  EXPECT_NE(svg.find("class=\"identity\""), std::string::npos);
  EXPECT_NE(svg.find("Fraction of positives"), std::string::npos);
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
}

TEST(HistogramSvg, SingleValueFillsOneBar) {
  ecd::Dataset d;
  for (int i = 0; i < 25; ++i) d.add(0.5, i % 2);
  const auto bars = elements(ecd::render_histogram_svg(d, 10), "rect", "bar");
  ASSERT_EQ(bars.size(), 10u);
  for (const Attrs& b : bars) {
    EXPECT_EQ(b.at("data-count"), b.at("data-bin") == "6" ? "25" : "0");
  }
}

TEST(HistogramSvg, CompressedLogOddsPileUpAtTheEdges) {
  const auto data = simulated(0.0, 4);
  const auto counts = ecd::histogram_counts(data, 10);
  for (std::size_t m = 1; m + 1 < counts.size(); ++m) {
    EXPECT_GT(counts[0], counts[m]);
    EXPECT_GT(counts[9], counts[m]);
  }
  const auto bars = elements(ecd::render_histogram_svg(data, 10), "rect", "bar");
  double tallest_height = 0;
  std::string tallest_bin;
  for (const Attrs& b : bars) {
    if (num(b, "height") > tallest_height) {
      tallest_height = num(b, "height");
      tallest_bin = b.at("data-bin");
    }
  }
  EXPECT_TRUE(tallest_bin == "1" || tallest_bin == "10") << tallest_bin;
}

TEST(CurveSvg, AnnotatesMinimum) {
  const auto curve = ecd::ecd_curve(2001);
  const std::string svg = ecd::render_ecd_curve_svg(curve);
  const auto minimum = elements(svg, "circle", "minimum");
  ASSERT_EQ(minimum.size(), 1u);
  EXPECT_NEAR(num(minimum[0], "data-score"), -0.2785, 5e-4);
  // The two branches mirror each other, so the minimum sits at p* or 1 - p*.
  const double p = num(minimum[0], "data-prob");
  EXPECT_NEAR(minimum[0].at("data-label") == "1" ? p : 1.0 - p, 0.7822, 1e-3);
  EXPECT_NE(svg.find("min -0.2785 at p = "), std::string::npos);
  EXPECT_EQ(svg, ecd::render_ecd_curve_svg(curve));
}

TEST(CurveSvg, ShapeOfBranches) {
  const auto curve = ecd::ecd_curve(2001);
  const auto& mid = curve[1000];
  EXPECT_EQ(mid.prob, 0.5);
  EXPECT_EQ(mid.score_label0, 0.0);
  EXPECT_EQ(mid.score_label1, 0.0);
  EXPECT_EQ(curve.front().prob, 1e-4);
  EXPECT_GT(curve.front().score_label1, 9.0);
  EXPECT_GT(curve.back().score_label0, 9.0);
  const auto min = ecd::curve_minimum(curve);
  EXPECT_GE(min.score, -0.2790);
  EXPECT_LE(min.score, -0.2780);
}

}  // namespace
