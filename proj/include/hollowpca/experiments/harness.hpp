#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hollowpca/experiments/config.hpp"
#include "hollowpca/rng.hpp"

namespace hollowpca::experiments {

/// What one replicate hands back to the harness.
struct ReplicateOutput {
  std::vector<double> metrics;
  /// Optional per-sample table (rows = samples), kept for replicate 0 only.
  Matrix artifact;
};

struct ParamSpec {
  std::string name;
  double fallback = 0.0;
  std::string help;
};

struct OptionSpec {
  std::string name;
  std::vector<std::string> allowed;  // first entry is the default
  std::string help;
};

struct Record {
  Index grid_index = 0;
  Index replicate = 0;
  std::string seed_stream;
  std::string status = "ok";
  std::vector<double> metrics;
  double wall_time = 0.0;
};

struct ExperimentResult;

struct ExperimentSpec {
  ExperimentKind kind;
  std::string description;
  std::vector<ParamSpec> params;
  std::vector<OptionSpec> options;
  std::vector<std::string> metrics;
  std::vector<std::string> artifact_columns;
  /// Throws hollowpca::Error or ConfigError on an invalid point.
  std::function<void(const GridPoint&)> check;
  std::function<ReplicateOutput(const GridPoint&, const Seed&, bool want_artifact)> run;
  /// Experiment-level summary written to <name>_summary.json.
  std::function<json(const ExperimentResult&)> summarize;
};

const std::vector<ExperimentSpec>& catalog();
const ExperimentSpec& spec_for(ExperimentKind kind);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<GridPoint> points;
  std::vector<std::string> param_columns;
  std::vector<std::string> metric_columns;
  std::vector<std::string> artifact_columns;
  /// Sorted by (grid index, replicate).
  std::vector<Record> records;
  /// Replicate-0 artifacts, one per grid point (empty matrix when not produced).
  std::vector<Matrix> artifacts;

  Index failures() const;
  /// Metric values of successful replicates at one grid point.
  std::vector<double> column(Index grid_index, const std::string& metric) const;
  std::size_t metric_index(const std::string& metric) const;
};

struct RunOptions {
  /// 0 means the OpenMP default.
  int workers = 0;
};

/// Seed of replicate `rep` at a grid point: Seed(master, {stream, rep}).
Seed replicate_seed(const ExperimentConfig& cfg, const GridPoint& point, Index rep);

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Results table. The wall_time column is last and can be dropped for
/// byte-level comparisons.
std::string format_csv(const ExperimentResult& result, bool include_wall_time = true);
/// Per grid point: replicate counts, then mean and median of every metric.
std::string format_summary_csv(const ExperimentResult& result);
std::string format_artifacts_csv(const ExperimentResult& result);

/// Writes <name>.csv, <name>_summary.csv, <name>_summary.json, <name>.config.json
/// and, when present, <name>_artifacts.csv into `dir`. Returns the paths.
std::vector<std::string> write_outputs(const ExperimentResult& result, const std::string& dir);

double mean(const std::vector<double>& v);
double median(std::vector<double> v);
/// Least-squares slope of y on x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hollowpca::experiments
