#pragma once

// Synthetic miscalibrated binary classifier.
//
// Per sample, in this draw order:
//   u'  ~ Uniform(-h, h)             unscaled log-odds       (data stream)
//   u   = W * u'                     true log-odds
//   p   = logistic(u)                true probability
//   L   ~ Bernoulli(p)               label                   (data stream)
//   e   ~ Normal(mu, sigma^2)        log-odds noise          (noise stream)
//   q   = logistic(u + e)            estimated probability
// With sigma = 0 and mu = 0 the estimate equals the true probability exactly.
//
// The data stream is stream 0 of the seed and the noise stream is stream
// `noise_stream` (>= 1). The noise suite keeps the data stream fixed and gives
// each sigma its own noise stream, so every noise level perturbs the same
// underlying probabilities and labels.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ecd/binning.hpp"
#include "ecd/metrics.hpp"
#include "ecd/rng.hpp"

namespace ecd {

/// 1 / (1 + exp(-u)), evaluated without overflow for either sign of u.
inline double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

struct SimulationConfig {
  std::size_t n = 10000;
  double logodds_halfwidth = 10.0;
  double weight = 0.5;
  double noise_mean = 0.0;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t noise_stream = 1;

  void validate() const {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (!(logodds_halfwidth > 0.0) || !std::isfinite(logodds_halfwidth)) {
      throw std::invalid_argument("log-odds half-width must be positive");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument("weight must be positive");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
      throw std::invalid_argument("noise sigma must be non-negative");
    }
    if (!std::isfinite(noise_mean)) throw std::invalid_argument("noise mean must be finite");
    if (noise_stream == 0) throw std::invalid_argument("noise stream 0 is reserved for data");
  }
};

struct SimulatedDataset {
  std::vector<double> true_logodds;
  std::vector<double> true_probs;
  std::vector<int> labels;
  std::vector<double> estimated_probs;

  std::size_t size() const noexcept { return labels.size(); }

  /// (estimated_probs, labels) as a Dataset.
  Dataset dataset() const {
    Dataset d;
    d.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) d.add(estimated_probs[i], labels[i]);
    return d;
  }
};

/// Draws a dataset from explicit streams; `config.seed` and
/// `config.noise_stream` are ignored.
inline SimulatedDataset simulate(const SimulationConfig& config, Rng& data_rng, Rng& noise_rng) {
  config.validate();
  SimulatedDataset out;
  out.true_logodds.reserve(config.n);
  out.true_probs.reserve(config.n);
  out.labels.reserve(config.n);
  out.estimated_probs.reserve(config.n);
  const double h = config.logodds_halfwidth;
  for (std::size_t i = 0; i < config.n; ++i) {
    const double u = config.weight * data_rng.uniform(-h, h);
    const double p = logistic(u);
    const int label = data_rng.bernoulli(p) ? 1 : 0;
    const double noise = noise_rng.normal(config.noise_mean, config.noise_sigma);
    out.true_logodds.push_back(u);
    out.true_probs.push_back(p);
    out.labels.push_back(label);
    out.estimated_probs.push_back(logistic(u + noise));
  }
  return out;
}

inline SimulatedDataset simulate(const SimulationConfig& config) {
  config.validate();
  Rng data_rng = Rng::stream(config.seed, 0);
  Rng noise_rng = Rng::stream(config.seed, config.noise_stream);
  return simulate(config, data_rng, noise_rng);
}

struct SuiteRun {
  double sigma;
  std::uint64_t noise_stream;
  SimulatedDataset data;
  CalibrationReport report;
};

/// The sigmas of the reference three-level noise experiment.
inline const std::vector<double>& default_noise_sigmas() {
  static const std::vector<double> sigmas{0.0, 0.5, 2.0};
  return sigmas;
}

/// One simulate + build_report per sigma. Run k uses noise stream k + 1 of
/// base.seed, so `simulate` with that config reproduces it on its own.
inline std::vector<SuiteRun> run_noise_suite(const SimulationConfig& base,
                                             std::span<const double> sigmas,
                                             const BinSpec& spec = {},
                                             const ClipPolicy& policy = {}) {
  if (sigmas.empty()) throw std::invalid_argument("noise suite needs at least one sigma");
  std::vector<SuiteRun> runs;
  runs.reserve(sigmas.size());
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    SimulationConfig cfg = base;
    cfg.noise_sigma = sigmas[k];
    cfg.noise_stream = k + 1;
    SimulatedDataset data = simulate(cfg);
    CalibrationReport report = build_report(data.dataset(), spec, policy);
    runs.push_back({sigmas[k], cfg.noise_stream, std::move(data), std::move(report)});
  }
  return runs;
}

}  // namespace ecd
