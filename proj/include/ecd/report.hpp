#pragma once

// Rendering of calibration reports: JSON (full precision, round-trips),
// CSV and Markdown tables (4 decimals, threshold/bin/ECE/ESCE/ECD/count
// columns, weighted-sum row last, empty bins as N/A).

#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ecd/binning.hpp"
#include "ecd/error.hpp"

namespace ecd {

enum class ReportFormat { json, csv, markdown };

inline ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "'");
}

struct ReportDocument {
  ReportFormat format;
  std::string content;
};

inline constexpr int kReportSchemaVersion = 1;

namespace detail {

inline std::string fixed4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline std::string edge_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s;
}

}  // namespace detail

/// "0.1 <= p < 0.2"; the last bin reads "0.9 <= p <= 1".
inline std::string threshold_label(std::size_t bin, std::size_t num_bins) {
  const BinSpec spec(num_bins);
  const bool last = bin + 1 == num_bins;
  return detail::edge_label(spec.lower_edge(bin)) + (last ? " <= p <= " : " <= p < ") +
         detail::edge_label(spec.upper_edge(bin));
}

inline nlohmann::json report_to_json(const CalibrationReport& report) {
  nlohmann::json bins = nlohmann::json::array();
  for (const BinStats& b : report.bins) {
    nlohmann::json j{{"index", b.index}, {"count", b.count}, {"populated", b.populated()}};
    for (const char* key : {"conf", "frac_pos", "ece", "esce", "ecd"}) j[key] = nullptr;
    if (b.populated()) {
      j["conf"] = b.values->conf;
      j["frac_pos"] = b.values->frac_pos;
      j["ece"] = b.values->ece;
      j["esce"] = b.values->esce;
      j["ecd"] = b.values->ecd;
    }
    bins.push_back(std::move(j));
  }
  return {{"schema_version", kReportSchemaVersion},
          {"num_bins", report.bins.size()},
          {"n_total", report.n_total},
          {"ece", report.ece},
          {"esce", report.esce},
          {"ecd", report.ecd},
          {"brier", report.brier},
          {"nll", report.nll},
          {"bins", std::move(bins)}};
}

inline CalibrationReport report_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw DataError("unsupported report schema_version " + j.at("schema_version").dump());
    }
    CalibrationReport r;
    r.n_total = j.at("n_total").get<std::size_t>();
    r.ece = j.at("ece").get<double>();
    r.esce = j.at("esce").get<double>();
    r.ecd = j.at("ecd").get<double>();
    r.brier = j.at("brier").get<double>();
    r.nll = j.at("nll").get<double>();
    for (const auto& jb : j.at("bins")) {
      BinStats b;
      b.index = jb.at("index").get<std::size_t>();
      b.count = jb.at("count").get<std::size_t>();
      if (jb.at("populated").get<bool>()) {
        b.values = BinValues{jb.at("conf").get<double>(), jb.at("frac_pos").get<double>(),
                             jb.at("ece").get<double>(), jb.at("esce").get<double>(),
                             jb.at("ecd").get<double>()};
      }
      r.bins.push_back(b);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report JSON: ") + e.what());
  }
}

inline CalibrationReport report_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("report is not valid JSON");
  return report_from_json(j);
}

inline CalibrationReport report_from_json(const std::string& text) {
  return report_from_json(std::string_view(text));
}

inline CalibrationReport report_from_json(const char* text) {
  return report_from_json(std::string_view(text));
}

namespace detail {

struct TableRow {
  std::string threshold;
  std::string bin;
  std::string ece, esce, ecd;
  std::string count;
};

inline std::vector<TableRow> table_rows(const CalibrationReport& report) {
  std::vector<TableRow> rows;
  const std::size_t m_count = report.bins.size();
  for (const BinStats& b : report.bins) {
    TableRow row{threshold_label(b.index, m_count), std::to_string(b.index + 1),
                 "N/A", "N/A", "N/A", std::to_string(b.count)};
    if (b.populated()) {
      row.ece = fixed4(b.values->ece);
      row.esce = fixed4(b.values->esce);
      row.ecd = fixed4(b.values->ecd);
    }
    rows.push_back(std::move(row));
  }
  rows.push_back({"Weighted Sum", "", fixed4(report.ece), fixed4(report.esce), fixed4(report.ecd),
                  std::to_string(report.n_total)});
  return rows;
}

}  // namespace detail

inline ReportDocument render_report(const CalibrationReport& report, ReportFormat format) {
  std::string out;
  switch (format) {
    case ReportFormat::json:
      out = report_to_json(report).dump(2) + "\n";
      break;
    case ReportFormat::csv:
      out = "threshold,bin,ece,esce,ecd,count\n";
      for (const auto& r : detail::table_rows(report)) {
        out += r.threshold + ',' + r.bin + ',' + r.ece + ',' + r.esce + ',' + r.ecd + ',' +
               r.count + '\n';
      }
      break;
    case ReportFormat::markdown:
      out = "| Threshold | Bin | ECE | ESCE | ECD | Count |\n";
      out += "|---|---|---|---|---|---|\n";
      for (const auto& r : detail::table_rows(report)) {
        out += "| " + r.threshold + " | " + r.bin + " | " + r.ece + " | " + r.esce + " | " +
               r.ecd + " | " + r.count + " |\n";
      }
      out += "\nBrier: " + detail::fixed4(report.brier) + "\n";
      out += "NLL: " + detail::fixed4(report.nll) + "\n";
      break;
  }
  return {format, std::move(out)};
}

/// Side-by-side Markdown table of several reports with the same bin count,
/// one ECE/ESCE/ECD column group per labelled report.
inline std::string render_comparison_markdown(
    std::span<const std::pair<std::string, CalibrationReport>> labelled) {
  if (labelled.empty()) return {};
  const std::size_t m_count = labelled.front().second.bins.size();
  for (const auto& [label, r] : labelled) {
    if (r.bins.size() != m_count) {
      throw std::invalid_argument("reports to compare must share a bin count");
    }
  }
  std::string out = "| Threshold | Bin |";
  std::string rule = "|---|---|";
  for (const auto& [label, r] : labelled) {
    out += " ECE (" + label + ") | ESCE (" + label + ") | ECD (" + label + ") |";
    rule += "---|---|---|";
  }
  out += "\n" + rule + "\n";

  std::vector<std::vector<detail::TableRow>> tables;
  for (const auto& [label, r] : labelled) tables.push_back(detail::table_rows(r));
  for (std::size_t i = 0; i < tables.front().size(); ++i) {
    out += "| " + tables.front()[i].threshold + " | " + tables.front()[i].bin + " |";
    for (const auto& t : tables) out += " " + t[i].ece + " | " + t[i].esce + " | " + t[i].ecd + " |";
    out += "\n";
  }
  return out;
}

}  // namespace ecd
