#pragma once

// Command-line front end. `run` is callable in-process so tests can drive
// every subcommand without spawning processes.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecd/ecd.hpp"

namespace ecd::cli {

enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

struct Context {
  std::ostream& out;
  std::ostream& err;
  /// Seeds may be omitted only in interactive sessions.
  bool interactive = false;
  /// Fallback for `suite --out-dir`, normally taken from ECD_OUTPUT_DIR.
  std::string default_out_dir = ".";
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Writes to a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw DataError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// "0", "0.5", "2": shortest %g form used in file names and table labels.
inline std::string sigma_label(double sigma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", sigma);
  return buf;
}

namespace detail {

inline Eigen::VectorXd json_vector(const nlohmann::json& j) {
  if (j.is_number()) return Eigen::VectorXd::Constant(1, j.get<double>());
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

inline Eigen::MatrixXd json_matrix(const nlohmann::json& j) {
  if (j.is_number()) return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != rows) throw DataError("covariance is not square");
    for (Eigen::Index c = 0; c < rows; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

}  // namespace detail

/// Parses `{"schema_version": 1, "predictions": [{mean, covariance, truth}]}`
/// or a bare array of prediction objects. For d = 1 the fields may be plain
/// numbers, with `covariance` holding the variance.
inline std::vector<GaussianPrediction> parse_gaussian_json(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw DataError("gaussian input is not valid JSON");
  const nlohmann::json* items = &doc;
  if (doc.is_object()) {
    if (doc.contains("schema_version") && doc["schema_version"] != 1) {
      throw DataError("unsupported schema_version " + doc["schema_version"].dump());
    }
    if (!doc.contains("predictions")) throw DataError("missing 'predictions' array");
    items = &doc["predictions"];
  }
  if (!items->is_array()) throw DataError("'predictions' must be an array");

  std::vector<GaussianPrediction> preds;
  for (std::size_t i = 0; i < items->size(); ++i) {
    try {
      const auto& item = items->at(i);
      preds.emplace_back(detail::json_vector(item.at("mean")),
                         detail::json_matrix(item.at("covariance")),
                         detail::json_vector(item.at("truth")));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("prediction " + std::to_string(i) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("prediction " + std::to_string(i) + ": " + e.what());
    }
  }
  return preds;
}

struct EvaluateArgs {
  std::string input;
  std::size_t bins = BinSpec::kDefaultBins;
  double clip = ClipPolicy::kDefaultEpsilon;
  std::string format = "markdown";
  std::string output;
  std::string plots_dir;
};

struct SimulateArgs {
  SimulationConfig config;
  bool seed_given = false;
  std::string output;
  bool with_true_prob = false;
};

struct SuiteArgs {
  SimulationConfig base;
  bool seed_given = false;
  std::vector<double> sigmas = default_noise_sigmas();
  std::size_t bins = BinSpec::kDefaultBins;
  double clip = ClipPolicy::kDefaultEpsilon;
  std::string out_dir;
};

struct GaussianArgs {
  std::string input;
};

struct CurveArgs {
  std::size_t grid = 2001;
  double clip = ClipPolicy::kDefaultEpsilon;
  std::string output;
};

inline int run_evaluate(const EvaluateArgs& a, Context& ctx) {
  const ReportFormat format = parse_report_format(a.format);
  const BinSpec spec(a.bins);
  const ClipPolicy policy(a.clip);

  std::ifstream in(a.input, std::ios::binary);
  if (!in) throw DataError("cannot read " + a.input);
  const Dataset data = load_csv(in);
  const CalibrationReport report = build_report(data, spec, policy);
  const ReportDocument doc = render_report(report, format);
  if (a.output.empty()) {
    ctx.out << doc.content;
  } else {
    write_file_atomic(a.output, doc.content);
  }
  if (!a.plots_dir.empty()) {
    const std::filesystem::path dir(a.plots_dir);
    const auto points = reliability_points(report.bins);
    write_file_atomic(dir / "reliability.svg", render_reliability_svg(points));
    write_file_atomic(dir / "histogram.svg", render_histogram_svg(data, a.bins));
  }
  return kOk;
}

inline int run_simulate(const SimulateArgs& a, Context& ctx) {
  if (!a.seed_given && !ctx.interactive) {
    throw UsageError("--seed is required when not running interactively");
  }
  const SimulatedDataset sim = simulate(a.config);
  std::ostringstream csv;
  write_csv(csv, sim, a.with_true_prob);
  if (a.output.empty()) {
    ctx.out << csv.str();
  } else {
    write_file_atomic(a.output, csv.str());
  }
  return kOk;
}

inline int run_suite(const SuiteArgs& a, Context& ctx) {
  if (!a.seed_given && !ctx.interactive) {
    throw UsageError("--seed is required when not running interactively");
  }
  const BinSpec spec(a.bins);
  const ClipPolicy policy(a.clip);
  const std::filesystem::path dir(a.out_dir.empty() ? ctx.default_out_dir : a.out_dir);
  const auto runs = run_noise_suite(a.base, a.sigmas, spec, policy);

  std::vector<std::pair<std::string, CalibrationReport>> labelled;
  for (const SuiteRun& run : runs) {
    const std::string tag = "sigma-" + sigma_label(run.sigma);
    std::ostringstream csv;
    write_csv(csv, run.data, true);
    write_file_atomic(dir / ("data_" + tag + ".csv"), csv.str());
    write_file_atomic(dir / ("report_" + tag + ".md"),
                      render_report(run.report, ReportFormat::markdown).content);
    write_file_atomic(dir / ("report_" + tag + ".json"),
                      render_report(run.report, ReportFormat::json).content);
    ReliabilityOptions opts;
    opts.title = "Reliability diagram, sigma = " + sigma_label(run.sigma);
    write_file_atomic(dir / ("reliability_" + tag + ".svg"),
                      render_reliability_svg(reliability_points(run.report.bins), opts));
    write_file_atomic(dir / ("histogram_" + tag + ".svg"),
                      render_histogram_svg(run.data.dataset(), a.bins,
                                           "Predicted probabilities, sigma = " + sigma_label(run.sigma)));
    labelled.emplace_back("sigma=" + sigma_label(run.sigma), run.report);
  }

  bool monotone_ecd = true, monotone_ece = true;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (runs[k].sigma > runs[k - 1].sigma) {
      monotone_ecd = monotone_ecd && runs[k].report.ecd > runs[k - 1].report.ecd;
      monotone_ece = monotone_ece && runs[k].report.ece > runs[k - 1].report.ece;
    }
  }
  std::string table = render_comparison_markdown(labelled);
  table += "\nECD increasing with sigma: " + std::string(monotone_ecd ? "yes" : "no") + "\n";
  table += "ECE increasing with sigma: " + std::string(monotone_ece ? "yes" : "no") + "\n";
  write_file_atomic(dir / "comparison.md", table);
  ctx.out << table;
  return kOk;
}

inline int run_gaussian(const GaussianArgs& a, Context& ctx) {
  const auto preds = parse_gaussian_json(read_file(a.input));
  const nlohmann::json result{{"d", preds.empty() ? 0 : preds.front().dimension()},
                              {"n", preds.size()},
                              {"nees", nees(preds)},
                              {"ecd", ecd_gaussian(preds)}};
  ctx.out << result.dump(2) << "\n";
  return kOk;
}

inline int run_curve(const CurveArgs& a, Context& ctx) {
  if (a.grid < 2) throw UsageError("--grid must be at least 2");
  const auto curve = ecd_curve(a.grid, ClipPolicy(a.clip));
  const std::string doc = render_ecd_curve_svg(curve);
  if (a.output.empty()) {
    ctx.out << doc;
    return kOk;
  }
  write_file_atomic(a.output, doc);
  const CurveMinimum m = curve_minimum(curve);
  char line[128];
  std::snprintf(line, sizeof line, "minimum %.4f at p = %.4f (label %d)\n", m.score, m.prob, m.label);
  ctx.out << line;
  return kOk;
}

inline int run(int argc, const char* const* argv, Context ctx) {
  CLI::App app{"Calibration metrics toolkit: ECD, ECE, ESCE, Brier, NLL and NEES", "ecd"};
  app.require_subcommand(1);

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Score a prediction CSV (columns prob,label)");
  evaluate->add_option("--input", eval.input, "Prediction CSV")->required();
  evaluate->add_option("--bins", eval.bins, "Number of equal-width bins")->capture_default_str();
  evaluate->add_option("--clip", eval.clip, "Clip bound inside logarithms")->capture_default_str();
  evaluate->add_option("--format", eval.format, "markdown, csv or json")->capture_default_str();
  evaluate->add_option("--output", eval.output, "Report file (default stdout)");
  evaluate->add_option("--plots-dir", eval.plots_dir, "Write reliability and histogram SVGs here");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic miscalibrated dataset");
  auto add_sim_options = [](CLI::App* cmd, SimulationConfig& cfg) {
    cmd->add_option("--n", cfg.n, "Number of samples")->capture_default_str();
    cmd->add_option("--weight", cfg.weight, "Log-odds scale W")->capture_default_str();
    cmd->add_option("--halfwidth", cfg.logodds_halfwidth, "Uniform log-odds half-width")
        ->capture_default_str();
    cmd->add_option("--noise-mean", cfg.noise_mean, "Mean of the log-odds noise")
        ->capture_default_str();
  };
  add_sim_options(simulate_cmd, sim.config);
  simulate_cmd->add_option("--noise-sigma", sim.config.noise_sigma, "Std. dev. of the log-odds noise")
      ->capture_default_str();
  auto* sim_seed = simulate_cmd->add_option("--seed", sim.config.seed, "64-bit seed");
  simulate_cmd->add_option("--noise-stream", sim.config.noise_stream,
                           "Noise stream index; suite run k uses k + 1")
      ->capture_default_str();
  simulate_cmd->add_option("--output", sim.output, "CSV file (default stdout)");
  simulate_cmd->add_flag("--with-true-prob", sim.with_true_prob, "Add a true_prob column");

  SuiteArgs suite;
  auto* suite_cmd = app.add_subcommand("suite", "Run the three-level noise experiment");
  add_sim_options(suite_cmd, suite.base);
  suite_cmd->add_option("--sigmas", suite.sigmas, "Comma-separated noise levels")
      ->delimiter(',')
      ->capture_default_str();
  auto* suite_seed = suite_cmd->add_option("--seed", suite.base.seed, "64-bit base seed");
  suite_cmd->add_option("--bins", suite.bins, "Number of equal-width bins")->capture_default_str();
  suite_cmd->add_option("--clip", suite.clip, "Clip bound inside logarithms")->capture_default_str();
  suite_cmd->add_option("--out-dir", suite.out_dir, "Output directory (default $ECD_OUTPUT_DIR or .)");

  GaussianArgs gauss;
  auto* gaussian_cmd = app.add_subcommand("gaussian", "NEES and Gaussian ECD of state estimates");
  gaussian_cmd->add_option("--input", gauss.input, "JSON file of {mean, covariance, truth}")->required();

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "Plot the per-sample ECD score curve");
  curve_cmd->add_option("--grid", curve.grid, "Grid points")->capture_default_str();
  curve_cmd->add_option("--clip", curve.clip, "Clip bound")->capture_default_str();
  curve_cmd->add_option("--output", curve.output, "SVG file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    ctx.out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    ctx.out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*evaluate) return run_evaluate(eval, ctx);
    if (*simulate_cmd) {
      sim.seed_given = sim_seed->count() > 0;
      return run_simulate(sim, ctx);
    }
    if (*suite_cmd) {
      suite.seed_given = suite_seed->count() > 0;
      return run_suite(suite, ctx);
    }
    if (*gaussian_cmd) return run_gaussian(gauss, ctx);
    if (*curve_cmd) return run_curve(curve, ctx);
  } catch (const DataError& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::invalid_argument& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::filesystem::filesystem_error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}

}  // namespace ecd::cli
