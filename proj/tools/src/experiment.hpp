#pragma once

#include "config.hpp"

#include "featrank/dataset.hpp"
#include "featrank/eval.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace featrank::app {

inline constexpr const char* kRecordsFile = "records.csv";
inline constexpr const char* kSummaryFile = "summary.csv";
inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kFig1File = "fig1_data.csv";
inline constexpr const char* kFig2File = "fig2_data.csv";
inline constexpr const char* kReportFile = "report.md";

/// The dataset one (task, variant) cell is evaluated on.
Dataset prepare_dataset(const Dataset& raw, const ExperimentConfig& c, Task task, Variant variant);

/// Fixed-point with six decimals, the format of every number in result files.
std::string fixed6(double v);

/// "0.919/k=5/J=0.855", the cell layout of the result tables.
std::string table_cell(const BestResult& b);

struct CellResult {
  BestResult best;
  std::vector<ResultRecord> records;
  std::vector<std::string> feature_names;
  double wall_ms = 0.0;
};

struct EvaluationRun {
  std::vector<CellResult> cells;  // task, variant, method order of the config
  double wall_ms = 0.0;
};

EvaluationRun run_evaluation(const ExperimentConfig& c, bool progress = false);

/// Writes records.csv, summary.csv and manifest.json into c.output_dir.
void write_evaluation(const ExperimentConfig& c, const EvaluationRun& run);

/// Reads the files of write_evaluation from `dir` and writes fig1_data.csv,
/// fig2_data.csv and report.md next to them.
void write_report(const std::filesystem::path& dir);

/// Fits one ranker on the whole standardized cell dataset and writes the
/// ranking file. Returns its path.
std::filesystem::path write_ranking(const ExperimentConfig& c, Task task, Variant variant, Method method);

}  // namespace featrank::app
