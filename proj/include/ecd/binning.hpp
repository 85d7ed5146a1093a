#pragma once

// Equal-width reliability binning and the ECE / ESCE / per-bin ECD report.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecd/error.hpp"
#include "ecd/metrics.hpp"
#include "ecd/summation.hpp"

namespace ecd {

/// M equal-width bins over [0, 1]. Bin m covers [m/M, (m+1)/M) except the
/// last, which is closed at 1.
class BinSpec {
 public:
  static constexpr std::size_t kDefaultBins = 10;

  constexpr BinSpec() = default;
  explicit BinSpec(std::size_t num_bins) : num_bins_(num_bins) {
    if (num_bins == 0) throw std::invalid_argument("bin count must be at least 1");
  }

  constexpr std::size_t num_bins() const noexcept { return num_bins_; }

  double lower_edge(std::size_t m) const noexcept {
    return static_cast<double>(m) / static_cast<double>(num_bins_);
  }
  double upper_edge(std::size_t m) const noexcept {
    return m + 1 >= num_bins_ ? 1.0 : lower_edge(m + 1);
  }

 private:
  std::size_t num_bins_ = kDefaultBins;
};

inline std::size_t assign_bin(double prob, const BinSpec& spec) {
  if (!(prob >= 0.0 && prob <= 1.0)) {
    throw DataError("prob out of range");
  }
  const std::size_t m_count = spec.num_bins();
  auto idx = static_cast<std::size_t>(std::floor(prob * static_cast<double>(m_count)));
  if (idx >= m_count) idx = m_count - 1;
  // prob * M can round across an edge; settle against the edges themselves.
  if (idx > 0 && prob < spec.lower_edge(idx)) --idx;
  if (idx + 1 < m_count && prob >= spec.lower_edge(idx + 1)) ++idx;
  return idx;
}

/// Statistics of one populated bin.
struct BinValues {
  double conf;      ///< mean predicted probability
  double frac_pos;  ///< fraction of positive labels
  double ece;       ///< |frac_pos - conf|
  double esce;      ///< frac_pos - conf
  double ecd;       ///< unweighted mean per-sample ECD of the members

  friend bool operator==(const BinValues&, const BinValues&) = default;
};

struct BinStats {
  std::size_t index = 0;
  std::size_t count = 0;
  std::optional<BinValues> values;  ///< empty for unpopulated bins

  bool populated() const noexcept { return values.has_value(); }

  friend bool operator==(const BinStats&, const BinStats&) = default;
};

struct CalibrationReport {
  std::vector<BinStats> bins;
  std::size_t n_total = 0;
  double ece = 0.0;
  double esce = 0.0;
  double ecd = 0.0;
  double brier = 0.0;
  double nll = 0.0;

  friend bool operator==(const CalibrationReport&, const CalibrationReport&) = default;
};

inline std::vector<BinStats> bin_stats(const Dataset& data, const BinSpec& spec,
                                       const ClipPolicy& policy = {}) {
  detail::require_non_empty(data.size());
  const std::size_t m_count = spec.num_bins();
  std::vector<std::vector<double>> probs(m_count), labels(m_count), scores(m_count);
  for (const PredictionRecord& r : data) {
    const std::size_t m = assign_bin(r.prob(), spec);
    probs[m].push_back(r.prob());
    labels[m].push_back(static_cast<double>(r.label()));
    scores[m].push_back(ecd_sample_binary(r, policy));
  }

  std::vector<BinStats> out(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    out[m].index = m;
    out[m].count = probs[m].size();
    if (probs[m].empty()) continue;
    const double conf = pairwise_mean(probs[m]);
    const double frac_pos = pairwise_mean(labels[m]);
    const double signed_gap = frac_pos - conf;
    out[m].values = BinValues{conf, frac_pos, std::abs(signed_gap), signed_gap,
                              pairwise_mean(scores[m])};
  }
  return out;
}

namespace detail {

inline void check_counts(std::span<const BinStats> bins, std::size_t n_total) {
  if (n_total == 0) throw DataError("empty dataset");
  std::size_t total = 0;
  for (const BinStats& b : bins) total += b.count;
  if (total != n_total) {
    throw std::invalid_argument("bin counts sum to " + std::to_string(total) + ", expected " +
                                std::to_string(n_total));
  }
}

/// Count-weighted sum of a per-bin value; unpopulated bins contribute 0.
template <typename Field>
double weighted_sum(std::span<const BinStats> bins, std::size_t n_total, Field field) {
  check_counts(bins, n_total);
  std::vector<double> terms;
  terms.reserve(bins.size());
  for (const BinStats& b : bins) {
    if (!b.populated()) continue;
    terms.push_back(static_cast<double>(b.count) / static_cast<double>(n_total) * field(*b.values));
  }
  return pairwise_sum(terms);
}

}  // namespace detail

inline double ece(std::span<const BinStats> bins, std::size_t n_total) {
  return detail::weighted_sum(bins, n_total, [](const BinValues& v) { return v.ece; });
}

inline double esce(std::span<const BinStats> bins, std::size_t n_total) {
  return detail::weighted_sum(bins, n_total, [](const BinValues& v) { return v.esce; });
}

/// Count-weighted sum of per-bin ECD. Equals the global mean ECD for any
/// binning up to rounding.
inline double weighted_ecd(std::span<const BinStats> bins, std::size_t n_total) {
  return detail::weighted_sum(bins, n_total, [](const BinValues& v) { return v.ecd; });
}

/// Tolerance for the weighted-ECD versus global-ECD consistency check.
inline constexpr double kBinInvarianceTolerance = 1e-12;

inline CalibrationReport build_report(const Dataset& data, const BinSpec& spec = {},
                                      const ClipPolicy& policy = {}) {
  CalibrationReport report;
  report.bins = bin_stats(data, spec, policy);
  report.n_total = data.size();
  report.ece = ece(report.bins, report.n_total);
  report.esce = esce(report.bins, report.n_total);
  report.ecd = weighted_ecd(report.bins, report.n_total);
  report.brier = brier(data);
  report.nll = nll(data, policy);

  const double global = ecd_binary(data, policy);
  if (std::abs(report.ecd - global) > kBinInvarianceTolerance) {
    throw std::logic_error("binned ECD " + std::to_string(report.ecd) +
                           " disagrees with global ECD " + std::to_string(global));
  }
  return report;
}

struct ReliabilityPoint {
  double conf;
  double frac_pos;
  std::size_t count;
  std::size_t bin;  ///< zero-based bin index, used for labels

  friend bool operator==(const ReliabilityPoint&, const ReliabilityPoint&) = default;
};

/// Populated bins only, ordered by index.
inline std::vector<ReliabilityPoint> reliability_points(std::span<const BinStats> bins) {
  std::vector<ReliabilityPoint> points;
  for (const BinStats& b : bins) {
    if (b.populated()) points.push_back({b.values->conf, b.values->frac_pos, b.count, b.index});
  }
  return points;
}

}  // namespace ecd
