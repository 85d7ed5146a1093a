#pragma once

// Prediction CSV files: a header row naming at least `prob` and `label`
// columns, comma-separated, LF or CRLF line endings, optional UTF-8 BOM.
// Other columns (an `id`, a `true_prob`) are carried but ignored.

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ecd/error.hpp"
#include "ecd/metrics.hpp"
#include "ecd/simulation.hpp"

namespace ecd {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline Dataset load_csv(std::istream& in) {
  std::string line;
  std::size_t row = 0;
  std::optional<std::size_t> prob_col, label_col;
  std::size_t n_cols = 0;
  Dataset data;

  while (std::getline(in, line)) {
    ++row;
    std::string_view view(line);
    if (row == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (detail::trim(view).empty()) {
      if (row == 1) throw DataError(row, "missing header");
      continue;
    }
    const auto fields = detail::split_fields(view);
    if (row == 1) {
      n_cols = fields.size();
      for (std::size_t c = 0; c < fields.size(); ++c) {
        if (fields[c] == "prob") prob_col = c;
        if (fields[c] == "label") label_col = c;
      }
      if (!prob_col) throw DataError(row, "missing column 'prob'");
      if (!label_col) throw DataError(row, "missing column 'label'");
      continue;
    }
    if (fields.size() != n_cols) {
      throw DataError(row, "expected " + std::to_string(n_cols) + " fields, got " +
                               std::to_string(fields.size()));
    }
    const auto prob = detail::parse_double(fields[*prob_col]);
    if (!prob) throw DataError(row, "unparsable prob '" + std::string(fields[*prob_col]) + "'");
    if (!(*prob >= 0.0 && *prob <= 1.0)) throw DataError(row, "prob out of range");
    const std::string_view label = fields[*label_col];
    if (label != "0" && label != "1") {
      throw DataError(row, "label must be 0 or 1, got '" + std::string(label) + "'");
    }
    data.add(*prob, label == "1" ? 1 : 0);
  }
  if (row == 0) throw DataError(1, "missing header");
  return data;
}

inline Dataset load_csv_string(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

inline void write_csv(std::ostream& out, const Dataset& data) {
  out << "prob,label\n";
  for (const PredictionRecord& r : data) {
    out << detail::format_exact(r.prob()) << ',' << r.label() << '\n';
  }
}

/// Writes the estimated probabilities and labels, plus the true probability
/// as a trailing column when requested.
inline void write_csv(std::ostream& out, const SimulatedDataset& sim, bool include_true_prob = false) {
  out << (include_true_prob ? "prob,label,true_prob\n" : "prob,label\n");
  for (std::size_t i = 0; i < sim.size(); ++i) {
    out << detail::format_exact(sim.estimated_probs[i]) << ',' << sim.labels[i];
    if (include_true_prob) out << ',' << detail::format_exact(sim.true_probs[i]);
    out << '\n';
  }
}

}  // namespace ecd
