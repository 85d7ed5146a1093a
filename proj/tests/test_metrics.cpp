#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ecd/metrics.hpp"

namespace {

using ecd::ClipPolicy;
using ecd::Dataset;
using ecd::DiscreteDistribution;

// Reference values below were evaluated at 30 significant digits with mpmath.
constexpr double kScore09Label0 = 1.97750211960259744;
constexpr double kScore09Label1 = -0.219722457733621938;
constexpr double kBoundMinimum = -0.278464542761073795;
constexpr double kBoundArgmin = 0.782188294280199901;

Dataset random_dataset(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) d.add(u(gen), u(gen) < 0.5 ? 0 : 1);
  return d;
}

TEST(ClipPolicy, RejectsOutOfRangeEpsilon) {
  EXPECT_THROW(ClipPolicy(0.0), std::invalid_argument);
  EXPECT_THROW(ClipPolicy(0.5), std::invalid_argument);
  EXPECT_THROW(ClipPolicy(-1e-3), std::invalid_argument);
  EXPECT_NO_THROW(ClipPolicy(1e-6));
  EXPECT_EQ(ClipPolicy().epsilon(), 1e-4);
}

TEST(ClipProbability, ClampsOnlyTheBoundary) {
  EXPECT_EQ(ecd::clip_probability(0.5), 0.5);
  EXPECT_EQ(ecd::clip_probability(0.0), 0.0001);
  EXPECT_EQ(ecd::clip_probability(0.99995), 0.9999);
}

TEST(PredictionRecord, ValidatesFields) {
  EXPECT_THROW(ecd::PredictionRecord(1.5, 1), ecd::DataError);
  EXPECT_THROW(ecd::PredictionRecord(-0.1, 0), ecd::DataError);
  EXPECT_THROW(ecd::PredictionRecord(std::nan(""), 0), ecd::DataError);
  EXPECT_THROW(ecd::PredictionRecord(0.3, 2), ecd::DataError);
  EXPECT_NO_THROW(ecd::PredictionRecord(0.0, 0));
  EXPECT_NO_THROW(ecd::PredictionRecord(1.0, 1));
}

TEST(EcdSampleBinary, Examples) {
  EXPECT_EQ(ecd::ecd_sample_binary(0.5, 0), 0.0);
  EXPECT_NEAR(ecd::ecd_sample_binary(0.9, 0), kScore09Label0, 1e-14);
  EXPECT_NEAR(ecd::ecd_sample_binary(0.9, 1), kScore09Label1, 1e-14);
  EXPECT_NEAR(ecd::ecd_sample_binary(kBoundArgmin, 1), kBoundMinimum, 1e-14);
}

// Golden-section search over the clipped domain, independent of ecd_curve.
TEST(EcdSampleBinary, LowerBoundFromGoldenSection) {
  auto f = [](double p) { return ecd::ecd_sample_binary(p, 1); };
  double a = 0.5, b = 1.0 - 1e-4;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    (f(c) < f(d) ? b : a) = (f(c) < f(d) ? d : c);
  }
  const double p_star = 0.5 * (a + b);
  EXPECT_NEAR(p_star, kBoundArgmin, 1e-7);
  EXPECT_NEAR(f(p_star), -0.2785, 5e-4);
  EXPECT_NEAR(f(p_star), kBoundMinimum, 1e-13);
}

TEST(EcdSampleBinary, Properties) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double p = u(gen);
    EXPECT_NEAR(ecd::ecd_sample_binary(p, 1), ecd::ecd_sample_binary(1.0 - p, 0), 1e-12);
    for (int x : {0, 1}) EXPECT_GE(ecd::ecd_sample_binary(p, x), -0.27847);
    if (p < 0.5) {
      EXPECT_GT(ecd::ecd_sample_binary(p, 1), 0.0);
      EXPECT_LT(ecd::ecd_sample_binary(p, 0), 0.0);
    } else if (p > 0.5 && p < 1.0) {
      EXPECT_LT(ecd::ecd_sample_binary(p, 1), 0.0);
      EXPECT_GT(ecd::ecd_sample_binary(p, 0), 0.0);
    }
    const double delta = u(gen) * (0.5 - 1e-4);
    if (delta > 0.0) {
      EXPECT_GE(ecd::ecd_sample_binary(0.5 - delta, 1),
                std::abs(ecd::ecd_sample_binary(0.5 + delta, 1)));
    }
  }
  EXPECT_EQ(ecd::ecd_sample_binary(0.5, 0), 0.0);
  EXPECT_EQ(ecd::ecd_sample_binary(0.5, 1), 0.0);
}

TEST(EcdBinary, Examples) {
  Dataset halves;
  for (int i = 0; i < 7; ++i) halves.add(0.5, i % 2);
  EXPECT_EQ(ecd::ecd_binary(halves), 0.0);

  Dataset two;
  two.add(0.9, 0);
  two.add(0.9, 1);
  EXPECT_NEAR(ecd::ecd_binary(two), 0.878889830934487753, 1e-14);

  EXPECT_THROW(ecd::ecd_binary(Dataset{}), ecd::DataError);
}

TEST(NegativeEntropy, Examples) {
  EXPECT_NEAR(ecd::negative_entropy(DiscreteDistribution({0.5, 0.5})), -0.693147180559945309, 1e-15);
  EXPECT_NEAR(ecd::negative_entropy(DiscreteDistribution({0.0, 1.0})), -0.00102102903703094327, 1e-15);
  EXPECT_NEAR(ecd::negative_entropy(DiscreteDistribution({0.25, 0.25, 0.25, 0.25})),
              -1.38629436111989062, 1e-15);
}

TEST(DiscreteDistribution, Validates) {
  EXPECT_THROW(DiscreteDistribution({1.0}), ecd::DataError);
  EXPECT_THROW(DiscreteDistribution({0.6, 0.6}), ecd::DataError);
  EXPECT_THROW(DiscreteDistribution({1.2, -0.2}), ecd::DataError);
  EXPECT_NO_THROW(DiscreteDistribution({0.3, 0.7 + 5e-10}));
}

TEST(LogLikelihood, Examples) {
  EXPECT_NEAR(ecd::log_likelihood(DiscreteDistribution({0.5, 0.5}), 1), -0.693147180559945309, 1e-15);
  EXPECT_NEAR(ecd::log_likelihood(DiscreteDistribution({0.1, 0.9}), 1), -0.105360515657826301, 1e-15);
  EXPECT_NEAR(ecd::log_likelihood(DiscreteDistribution({0.1, 0.9}), 0), -2.30258509299404568, 1e-15);
  EXPECT_THROW(ecd::log_likelihood(DiscreteDistribution({0.1, 0.9}), 2), ecd::DataError);
}

TEST(EcdDiscrete, Examples) {
  const std::vector<DiscreteDistribution> uniform(5, DiscreteDistribution({0.5, 0.5}));
  const std::vector<std::size_t> labels{0, 1, 1, 0, 1};
  EXPECT_EQ(ecd::ecd_discrete(uniform, labels), 0.0);

  const std::vector<DiscreteDistribution> one{DiscreteDistribution({0.1, 0.9})};
  const std::vector<std::size_t> zero{0};
  // negEnt(0.1, 0.9) - ln 0.1
  EXPECT_NEAR(ecd::ecd_discrete(one, zero), -0.325082973391448240 + 2.30258509299404568, 1e-14);
  EXPECT_NEAR(ecd::ecd_discrete(one, zero), kScore09Label0, 1e-14);

  EXPECT_THROW(ecd::ecd_discrete(one, std::vector<std::size_t>{0, 1}), ecd::DataError);
  EXPECT_THROW(ecd::ecd_discrete({}, {}), ecd::DataError);
}

TEST(EcdDiscrete, MatchesBinaryFormOnRandomData) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Dataset d = random_dataset(gen, 50);
    std::vector<DiscreteDistribution> dists;
    std::vector<std::size_t> labels;
    for (const auto& r : d) {
      dists.push_back(DiscreteDistribution::binary(r.prob()));
      labels.push_back(static_cast<std::size_t>(r.label()));
      EXPECT_NEAR(ecd::negative_entropy(dists.back()) - ecd::log_likelihood(dists.back(), labels.back()),
                  ecd::ecd_sample_binary(r), 1e-12);
    }
    EXPECT_NEAR(ecd::ecd_discrete(dists, labels), ecd::ecd_binary(d), 1e-12);
  }
}

TEST(Nll, Examples) {
  Dataset halves;
  halves.add(0.5, 0);
  halves.add(0.5, 1);
  EXPECT_NEAR(ecd::nll(halves), 0.693147180559945309, 1e-15);

  Dataset sure;
  for (int i = 0; i < 3; ++i) sure.add(1.0, 1);
  EXPECT_NEAR(ecd::nll(sure), 0.000100005000333358335, 1e-15);

  Dataset one;
  one.add(0.9, 1);
  EXPECT_NEAR(ecd::nll(one), 0.105360515657826301, 1e-15);
  EXPECT_THROW(ecd::nll(Dataset{}), ecd::DataError);
}

TEST(Brier, Examples) {
  Dataset sure;
  sure.add(1.0, 1);
  sure.add(1.0, 1);
  EXPECT_EQ(ecd::brier(sure), 0.0);

  Dataset halves;
  halves.add(0.5, 0);
  halves.add(0.5, 1);
  EXPECT_EQ(ecd::brier(halves), 0.25);

  Dataset wrong;
  wrong.add(0.9, 0);
  EXPECT_NEAR(ecd::brier(wrong), 0.81, 1e-15);
  EXPECT_THROW(ecd::brier(Dataset{}), ecd::DataError);
}

TEST(Decomposition, EcdEqualsNllPlusNegativeEntropy) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 200; ++trial) {
    Dataset d = random_dataset(gen, 80);
    d.add(0.0, 1);
    d.add(1.0, 1);
    const double ecd_value = ecd::ecd_binary(d);
    const double nll_value = ecd::nll(d);
    EXPECT_NEAR(ecd_value, nll_value + ecd::mean_negative_entropy(d), 1e-12);
    EXPECT_LE(ecd_value, nll_value);
    const double b = ecd::brier(d);
    EXPECT_GE(b, 0.0);
    EXPECT_LE(b, 1.0);
  }
}

TEST(EcdCurve, Examples) {
  EXPECT_THROW(ecd::ecd_curve(1), std::invalid_argument);
  const auto curve = ecd::ecd_curve(2001);
  ASSERT_EQ(curve.size(), 2001u);
  EXPECT_EQ(curve.front().prob, 1e-4);
  EXPECT_NEAR(curve.front().score_label1, 9.20931934293915179, 1e-12);
  EXPECT_EQ(curve.back().prob, 1.0 - 1e-4);
  EXPECT_EQ(curve[1000].prob, 0.5);
  EXPECT_EQ(curve[1000].score_label0, 0.0);
  EXPECT_EQ(curve[1000].score_label1, 0.0);

  double lowest = 0.0;
  for (const auto& c : curve) lowest = std::min({lowest, c.score_label0, c.score_label1});
  EXPECT_NEAR(lowest, -0.2785, 5e-4);
  EXPECT_GE(lowest, kBoundMinimum);
}

}  // namespace
