#pragma once

// Closed-form calibration scores for binary and discrete classifiers:
// per-sample and mean ECD, negative entropy, log-likelihood, NLL and Brier.
// All logarithms are natural. Probabilities are clipped into
// [epsilon, 1 - epsilon] only inside logarithmic terms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecd/error.hpp"
#include "ecd/summation.hpp"

namespace ecd {

/// Clip bound applied to probabilities before taking logarithms.
class ClipPolicy {
 public:
  static constexpr double kDefaultEpsilon = 1e-4;

  constexpr ClipPolicy() = default;
  explicit ClipPolicy(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
      throw std::invalid_argument("clip epsilon must lie in (0, 0.5), got " +
                                  std::to_string(epsilon));
    }
  }

  constexpr double epsilon() const noexcept { return epsilon_; }

  friend bool operator==(const ClipPolicy&, const ClipPolicy&) = default;

 private:
  double epsilon_ = kDefaultEpsilon;
};

/// One estimated positive-class probability and its true binary label.
class PredictionRecord {
 public:
  PredictionRecord(double prob, int label) : prob_(prob), label_(label) {
    if (!(prob >= 0.0 && prob <= 1.0)) {
      throw DataError("prob out of range");
    }
    if (label != 0 && label != 1) {
      throw DataError("label must be 0 or 1");
    }
  }

  double prob() const noexcept { return prob_; }
  int label() const noexcept { return label_; }

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;

 private:
  double prob_;
  int label_;
};

/// Ordered collection of prediction records. Order is preserved so that
/// every reduction over it is deterministic.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<PredictionRecord> records) : records_(std::move(records)) {}

  void add(double prob, int label) { records_.emplace_back(prob, label); }
  void add(const PredictionRecord& record) { records_.push_back(record); }
  void reserve(std::size_t n) { records_.reserve(n); }

  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const PredictionRecord& operator[](std::size_t i) const { return records_[i]; }
  std::span<const PredictionRecord> records() const noexcept { return records_; }

  auto begin() const noexcept { return records_.begin(); }
  auto end() const noexcept { return records_.end(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<PredictionRecord> records_;
};

/// Probability vector over K >= 2 classes.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit DiscreteDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2) {
      throw DataError("discrete distribution needs at least two classes");
    }
    for (double p : probs_) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw DataError("class probability out of range");
      }
    }
    if (std::abs(pairwise_sum(probs_) - 1.0) > kSumTolerance) {
      throw DataError("class probabilities do not sum to 1");
    }
  }

  /// The two-class distribution (1 - p, p) for a positive-class probability p.
  static DiscreteDistribution binary(double prob) { return DiscreteDistribution({1.0 - prob, prob}); }

  std::size_t num_classes() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t k) const { return probs_[k]; }

 private:
  std::vector<double> probs_;
};

namespace detail {
inline void require_non_empty(std::size_t n) {
  if (n == 0) throw DataError("empty dataset");
}
}  // namespace detail

inline double clip_probability(double p, const ClipPolicy& policy = {}) {
  return std::clamp(p, policy.epsilon(), 1.0 - policy.epsilon());
}

/// One summand of the binary ECD: (p - x) * log(p / (1 - p)) on the clipped
/// probability. Positive means over-confident, negative under-confident; the
/// minimum over p is about -0.27846 (at p ~= 0.7822 for x = 1).
inline double ecd_sample_binary(double prob, int label, const ClipPolicy& policy = {}) {
  const double p = clip_probability(prob, policy);
  return (p - static_cast<double>(label)) * std::log(p / (1.0 - p));
}

inline double ecd_sample_binary(const PredictionRecord& r, const ClipPolicy& policy = {}) {
  return ecd_sample_binary(r.prob(), r.label(), policy);
}

/// Mean binary ECD over a dataset.
inline double ecd_binary(const Dataset& data, const ClipPolicy& policy = {}) {
  detail::require_non_empty(data.size());
  return pairwise_sum_of(data, [&](const PredictionRecord& r) {
           return ecd_sample_binary(r, policy);
         }) /
         static_cast<double>(data.size());
}

/// Sum over classes of p_k log p_k on clipped entries. Always <= 0.
inline double negative_entropy(const DiscreteDistribution& dist, const ClipPolicy& policy = {}) {
  return pairwise_sum_of(dist.probs(), [&](double p) {
    const double c = clip_probability(p, policy);
    return c * std::log(c);
  });
}

/// Negative entropy of the two-class distribution (1 - p, p).
inline double negative_entropy(double prob, const ClipPolicy& policy = {}) {
  const double p = clip_probability(prob, policy);
  return p * std::log(p) + (1.0 - p) * std::log(1.0 - p);
}

/// Log of the clipped probability assigned to the true class.
inline double log_likelihood(const DiscreteDistribution& dist, std::size_t label,
                             const ClipPolicy& policy = {}) {
  if (label >= dist.num_classes()) {
    throw DataError("label " + std::to_string(label) + " out of range for " +
                    std::to_string(dist.num_classes()) + " classes");
  }
  return std::log(clip_probability(dist[label], policy));
}

/// Binary log-likelihood x log p + (1 - x) log(1 - p) on the clipped probability.
inline double log_likelihood(double prob, int label, const ClipPolicy& policy = {}) {
  const double p = clip_probability(prob, policy);
  return label == 1 ? std::log(p) : std::log(1.0 - p);
}

/// General discrete ECD: mean of (negative entropy - log-likelihood).
inline double ecd_discrete(std::span<const DiscreteDistribution> dists,
                           std::span<const std::size_t> labels, const ClipPolicy& policy = {}) {
  if (dists.size() != labels.size()) {
    throw DataError("distribution and label counts differ (" + std::to_string(dists.size()) +
                    " vs " + std::to_string(labels.size()) + ")");
  }
  detail::require_non_empty(dists.size());
  std::vector<double> terms;
  terms.reserve(dists.size());
  for (std::size_t i = 0; i < dists.size(); ++i) {
    terms.push_back(negative_entropy(dists[i], policy) - log_likelihood(dists[i], labels[i], policy));
  }
  return pairwise_mean(terms);
}

inline double nll(const Dataset& data, const ClipPolicy& policy = {}) {
  detail::require_non_empty(data.size());
  return pairwise_sum_of(data, [&](const PredictionRecord& r) {
           return -log_likelihood(r.prob(), r.label(), policy);
         }) /
         static_cast<double>(data.size());
}

/// Mean per-record negative entropy; with nll() this decomposes ecd_binary().
inline double mean_negative_entropy(const Dataset& data, const ClipPolicy& policy = {}) {
  detail::require_non_empty(data.size());
  return pairwise_sum_of(data, [&](const PredictionRecord& r) {
           return negative_entropy(r.prob(), policy);
         }) /
         static_cast<double>(data.size());
}

/// Mean squared error between raw probabilities and outcomes.
inline double brier(const Dataset& data) {
  detail::require_non_empty(data.size());
  return pairwise_sum_of(data, [](const PredictionRecord& r) {
           const double d = r.prob() - static_cast<double>(r.label());
           return d * d;
         }) /
         static_cast<double>(data.size());
}

struct CurvePoint {
  double prob;
  double score_label0;
  double score_label1;
};

/// Per-sample ECD on an even grid over [epsilon, 1 - epsilon] for both labels.
inline std::vector<CurvePoint> ecd_curve(std::size_t grid_size, const ClipPolicy& policy = {}) {
  if (grid_size < 2) {
    throw std::invalid_argument("curve grid needs at least 2 points");
  }
  const double lo = policy.epsilon();
  const double hi = 1.0 - policy.epsilon();
  const double step = (hi - lo) / static_cast<double>(grid_size - 1);
  std::vector<CurvePoint> curve;
  curve.reserve(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    double p = lo + step * static_cast<double>(i);
    if (i == grid_size - 1) p = hi;
    // Odd grids have an exact centre; snap it so the curve passes through 0.
    if (grid_size % 2 == 1 && i == grid_size / 2) p = 0.5;
    curve.push_back({p, ecd_sample_binary(p, 0, policy), ecd_sample_binary(p, 1, policy)});
  }
  return curve;
}

}  // namespace ecd
