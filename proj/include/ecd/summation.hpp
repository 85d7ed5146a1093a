#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ecd {

namespace detail {
inline constexpr std::size_t kPairwiseBlock = 8;
}

/// Pairwise (tree) summation. The reduction tree depends only on the input
/// length, so results are bit-identical for a given ordering regardless of
/// how the values were produced. Error grows as O(eps log n).
inline double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n <= detail::kPairwiseBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

/// Mean via pairwise_sum; the caller guarantees a non-empty input.
inline double pairwise_mean(std::span<const double> values) {
  return pairwise_sum(values) / static_cast<double>(values.size());
}

/// Maps each element through `f` and reduces pairwise.
template <typename Range, typename F>
double pairwise_sum_of(const Range& range, F&& f) {
  std::vector<double> terms;
  terms.reserve(std::size(range));
  for (const auto& item : range) terms.push_back(f(item));
  return pairwise_sum(terms);
}

}  // namespace ecd
